#!/usr/bin/env python3
"""
FairGo
Punto de entrada de línea de comandos del pipeline

Uso: fairgo <etapa> --config <ruta> [--seed N] [--out DIR]

Autor: Equipo de Desarrollo
Versión: 1.0.0
"""

import argparse
import logging
import os
import sys

import colorlog
from threadpoolctl import threadpool_limits

# Agregar el directorio raíz al path para importaciones
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config.run_config import load_run_config
from config.settings import APP_CONFIG, ARTIFACT_CONFIG, LOGGING_CONFIG, RUNTIME_CONFIG
from controllers.pipeline_controller import PipelineController
from utils.exceptions import FairGoError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def setup_logging(level=None):
    """Configurar consola con colores y archivo de log"""
    level = getattr(logging, (level or LOGGING_CONFIG['level']).upper(), logging.INFO)
    console = colorlog.StreamHandler(sys.stderr)
    console.setFormatter(colorlog.ColoredFormatter(LOGGING_CONFIG['color_format']))
    handlers = [console]
    try:
        log_dir = os.path.dirname(LOGGING_CONFIG['file'])
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        file_handler = logging.FileHandler(LOGGING_CONFIG['file'], encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(LOGGING_CONFIG['format']))
        handlers.append(file_handler)
    except OSError as e:
        print(f"Error configurando el archivo de log: {e}", file=sys.stderr)

    logging.basicConfig(level=level, handlers=handlers, force=True)
    logger = logging.getLogger(__name__)
    logger.debug(f"Iniciando {APP_CONFIG['name']} v{APP_CONFIG['version']}")
    return logger


def build_parser():
    parser = argparse.ArgumentParser(prog='fairgo', description=APP_CONFIG['description'])
    parser.add_argument('stage', choices=ARTIFACT_CONFIG['stages'], help='Etapa del pipeline')
    parser.add_argument('--config', required=True, help='Archivo de configuración KEY=VALUE')
    parser.add_argument('--seed', type=int, default=None, help='Semilla global (reemplaza SEED)')
    parser.add_argument('--out', default=None, help='Directorio de salida (reemplaza OUTPUT_DIR)')
    parser.add_argument('--log-level', default=None, help='Nivel de logging')
    return parser


def main(argv=None):
    """Función principal"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    logger = setup_logging(args.log_level)
    try:
        config = load_run_config(args.config, args.seed, args.out)
    except FairGoError as e:
        logger.error(f"Configuración inválida: {e}")
        return EXIT_FAILURE

    with threadpool_limits(limits=RUNTIME_CONFIG['threads']):
        result = PipelineController(config).run_stage(args.stage)
    if result['success']:
        logger.info(result['message'])
        return EXIT_OK
    logger.error(result['message'])
    return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
