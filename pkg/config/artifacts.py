"""
Directorio de artefactos de una corrida: manifiesto, hashes y candado
"""
import hashlib
import json
import logging
import os
from contextlib import contextmanager

from config.settings import ARTIFACT_CONFIG
from utils.exceptions import ConcurrentRunError, MissingPrerequisiteError

logger = logging.getLogger(__name__)

STAGE_DIRS = {
    'ingest': 'ingest',
    'train-base': 'base',
    'train-fair': 'fair',
    'audit': 'audit',
    'report': 'report'
}


def file_sha256(path):
    """sha256 hexadecimal del contenido de un archivo"""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


class ArtifactStore:
    """
    Clase para manejar los artefactos de las etapas bajo un directorio de salida
    """

    def __init__(self, root):
        self.root = root
        self.manifest_path = os.path.join(root, ARTIFACT_CONFIG['manifest_file'])
        self.lock_path = os.path.join(root, ARTIFACT_CONFIG['lock_file'])

    def stage_dir(self, stage, create=False):
        """
        Directorio de una etapa

        Args:
            stage (str): Nombre de la etapa
            create (bool): Crear el directorio si no existe

        Returns:
            str: Ruta del directorio
        """
        path = os.path.join(self.root, STAGE_DIRS[stage])
        if create:
            os.makedirs(path, exist_ok=True)
        return path

    def path(self, stage, name):
        return os.path.join(self.stage_dir(stage), name)

    @contextmanager
    def lock(self):
        """
        Context manager que impide dos escritores sobre el mismo directorio

        Yields:
            str: Ruta del archivo de candado
        """
        os.makedirs(self.root, exist_ok=True)
        try:
            fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise ConcurrentRunError(f"Otra etapa está escribiendo en {self.root} ({self.lock_path})")
        try:
            os.write(fd, str(os.getpid()).encode('ascii'))
            os.close(fd)
            yield self.lock_path
        finally:
            try:
                os.remove(self.lock_path)
            except FileNotFoundError:
                logger.warning(f"El candado {self.lock_path} desapareció durante la etapa")

    def read_manifest(self):
        if not os.path.exists(self.manifest_path):
            return {'format_version': ARTIFACT_CONFIG['format_version'], 'stages': {}}
        with open(self.manifest_path, 'r', encoding='utf-8') as f:
            return json.load(f)

    def record(self, stage, hash_value, paths, extra=None):
        """
        Registrar los artefactos de una etapa con sus hashes

        Args:
            stage (str): Etapa
            hash_value (str): Hash de configuración de la etapa
            paths (list): Archivos escritos
            extra (dict|None): Marcas adicionales de la etapa
        """
        manifest = self.read_manifest()
        manifest['stages'][stage] = {
            'config_hash': hash_value,
            'artifacts': {
                os.path.relpath(p, self.root).replace(os.sep, '/'): file_sha256(p) for p in sorted(paths)
            },
            'extra': extra or {}
        }
        temporary = self.manifest_path + '.tmp'
        with open(temporary, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(manifest, f, sort_keys=True, indent=2)
            f.write('\n')
        os.replace(temporary, self.manifest_path)
        logger.info(f"Etapa '{stage}' registrada con {len(paths)} artefactos")

    def require(self, stage, hash_value):
        """
        Verificar que una etapa previa existe, coincide en hash y sus archivos están intactos

        Returns:
            dict: Entrada del manifiesto de la etapa
        """
        entry = self.read_manifest()['stages'].get(stage)
        if entry is None:
            raise MissingPrerequisiteError(f"Falta la etapa previa '{stage}' en {self.root}")
        if entry['config_hash'] != hash_value:
            raise MissingPrerequisiteError(
                f"La etapa '{stage}' se generó con otra configuración; vuelva a ejecutarla"
            )
        for relative, digest in entry['artifacts'].items():
            path = os.path.join(self.root, relative)
            if not os.path.exists(path) or file_sha256(path) != digest:
                raise MissingPrerequisiteError(f"Artefacto ausente o modificado: {relative}")
        return entry
