"""
Carga de la configuración de una corrida desde un archivo KEY=VALUE

Precedencia: valores por defecto < preset del dataset < archivo < flags CLI.
"""
import logging
import os
from dataclasses import dataclass

from dotenv import dotenv_values

from config.settings import (BASE_MODEL_CONFIG, DATASET_CONFIG, DATASET_PRESETS, EVAL_CONFIG,
                             FAIR_CONFIG, RUN_CONFIG, SUMMARY_WEIGHT_PRESETS, SYNTHETIC_CONFIG)
from models.attacker import AttackerConfig
from models.base_model import config_hash
from models.fairgo import FairTrainConfig, SummaryConfig
from models.recommenders import BaseTrainConfig
from utils.exceptions import ConfigurationError
from utils.validators import RunConfigValidator

logger = logging.getLogger(__name__)

DATASET_ATTRIBUTES = {
    'movielens': ('gender', 'age', 'occupation'),
    'lastfm': ('gender', 'age')
}


def default_values():
    """Todas las claves conocidas con su valor por defecto"""
    values = {}
    for section in (DATASET_CONFIG, BASE_MODEL_CONFIG, FAIR_CONFIG, EVAL_CONFIG, SYNTHETIC_CONFIG, RUN_CONFIG):
        values.update(section)
    return values


@dataclass(frozen=True)
class RunConfig:
    """Configuración validada y tipada de una corrida"""
    dataset: dict
    base: dict
    fair: dict
    eval: dict
    synthetic: dict
    seed: int
    output_dir: str

    def dataset_attributes(self):
        """Atributos disponibles en el dataset configurado"""
        name = self.dataset['name']
        if name == 'synthetic':
            return tuple(f"planted_{k}" for k in range(len(self.synthetic['cardinalities'])))
        return DATASET_ATTRIBUTES[name]

    def attributes(self):
        """Subconjunto de atributos a filtrar y auditar (todos si está vacío)"""
        return tuple(self.dataset['attributes']) or self.dataset_attributes()

    def base_train_config(self):
        return BaseTrainConfig(
            epochs=self.base['epochs'],
            batch_size=self.base['batch_size'],
            learning_rate=self.base['lr'],
            l2=self.base['l2'],
            dim=self.base['dim'],
            layers=self.base['layers'],
            seed=self.seed
        )

    def summary_config(self):
        return SummaryConfig(
            variant=self.fair['variant'],
            order=self.fair['order'],
            weights=tuple(self.fair['weights']),
            aggregation_hidden=tuple(self.fair['aggregation_hidden']),
            neighbor_cap=self.fair['neighbor_cap']
        )

    def fair_train_config(self):
        return FairTrainConfig(
            balance=self.fair['lambda'],
            epochs=self.fair['epochs'],
            batch_size=self.fair['batch_size'],
            filter_lr=self.fair['filter_lr'],
            discriminator_lr=self.fair['discriminator_lr'],
            discriminator_steps=self.fair['discriminator_steps'],
            discriminator_warmup=self.fair['discriminator_warmup'],
            warmup_users=self.fair['warmup_users'],
            filter_hidden=tuple(self.fair['filter_hidden']),
            discriminator_hidden=tuple(self.fair['discriminator_hidden']),
            slope=self.fair['leaky_slope'],
            seed=self.seed
        )

    def attacker_config(self):
        return AttackerConfig(epochs=self.eval['attacker_epochs'], learning_rate=self.eval['attacker_lr'])

    def stage_hashes(self):
        """
        Hash encadenado por etapa: cada etapa incluye el hash de su prerrequisito

        Returns:
            dict: etapa -> sha256
        """
        dataset = {k: v for k, v in self.dataset.items() if k != 'attributes'}
        ingest = config_hash({
            'dataset': dataset,
            'synthetic': self.synthetic if self.dataset['name'] == 'synthetic' else None,
            'seed': self.seed
        })
        base = config_hash({'previous': ingest, 'base': self.base})
        fair = config_hash({'previous': base, 'fair': self.fair, 'attributes': list(self.attributes())})
        audit = config_hash({'previous': fair, 'eval': self.eval})
        report = config_hash({'previous': audit})
        return {'ingest': ingest, 'train-base': base, 'train-fair': fair, 'audit': audit, 'report': report}


def load_run_config(path, seed=None, output_dir=None):
    """
    Leer, combinar y validar la configuración de una corrida

    Args:
        path (str): Archivo KEY=VALUE
        seed (int|None): Semilla de la línea de comandos
        output_dir (str|None): Directorio de salida de la línea de comandos

    Returns:
        RunConfig: Configuración validada
    """
    if not path or not os.path.isfile(path):
        raise ConfigurationError(f"No se encontró el archivo de configuración: {path}")
    file_values = {k: v for k, v in dotenv_values(path).items() if v is not None}

    values = default_values()
    unknown = sorted(set(file_values) - set(values))
    if unknown:
        raise ConfigurationError(f"Claves de configuración desconocidas: {', '.join(unknown)}")

    dataset_name = file_values.get('DATASET_NAME', values['DATASET_NAME']).strip().lower()
    values.update(DATASET_PRESETS.get(dataset_name, {}))
    base_model = file_values.get('BASE_MODEL', values['BASE_MODEL']).strip().lower()
    if base_model in SUMMARY_WEIGHT_PRESETS:
        values['SUMMARY_WEIGHTS'] = SUMMARY_WEIGHT_PRESETS[base_model]
    values.update(file_values)
    if seed is not None:
        values['SEED'] = str(seed)
    if output_dir is not None:
        values['OUTPUT_DIR'] = str(output_dir)

    sections = RunConfigValidator().validar_config(values)
    config = RunConfig(**sections)
    available = config.dataset_attributes()
    extra = [a for a in config.attributes() if a not in available]
    if extra:
        raise ConfigurationError(
            f"Atributos no disponibles en '{dataset_name}': {', '.join(extra)}. Disponibles: {', '.join(available)}"
        )
    logger.info(f"Configuración cargada desde {path} (dataset {dataset_name}, semilla {config.seed})")
    return config
