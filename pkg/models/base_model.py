"""
Clase base para todos los modelos entrenables de FairGo
"""
import hashlib
import json
import logging
import os
from abc import ABC, abstractmethod

import numpy as np

from config.settings import ARTIFACT_CONFIG
from utils.exceptions import MissingFileError, ShapeMismatchError, ValidationError

logger = logging.getLogger(__name__)


def config_hash(section):
    """
    Hash estable de una sección de configuración

    Args:
        section (dict): Valores serializables en JSON

    Returns:
        str: sha256 hexadecimal del JSON canónico
    """
    canonical = json.dumps(section, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def save_checkpoint(path, arrays, kind, seed=None, hash_value=None, extra=None):
    """
    Guardar arreglos con un encabezado de formato versionado

    Args:
        path (str): Ruta del archivo .npz
        arrays (dict): nombre -> np.ndarray
        kind (str): Tipo de modelo
        seed (int|None): Semilla de la corrida
        hash_value (str|None): Hash de la configuración
        extra (dict|None): Metadatos adicionales

    Returns:
        str: Ruta escrita
    """
    meta = {
        'format': ARTIFACT_CONFIG['checkpoint_format'],
        'version': ARTIFACT_CONFIG['format_version'],
        'kind': kind,
        'seed': seed,
        'config_hash': hash_value,
        'shapes': {name: list(np.shape(a)) for name, a in arrays.items()},
        'extra': extra or {}
    }
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'wb') as f:
        np.savez(f, __meta__=np.array(json.dumps(meta, sort_keys=True)), **arrays)
    logger.info(f"Checkpoint '{kind}' guardado en {path}")
    return path


def load_checkpoint(path, kind=None):
    """
    Cargar un checkpoint y validar su encabezado

    Returns:
        tuple: (dict de arreglos, metadatos)
    """
    if not os.path.exists(path):
        raise MissingFileError(f"No se encontró el checkpoint: {path}")
    with np.load(path, allow_pickle=False) as archive:
        meta = json.loads(str(archive['__meta__']))
        arrays = {name: archive[name] for name in archive.files if name != '__meta__'}
    if meta.get('format') != ARTIFACT_CONFIG['checkpoint_format']:
        raise ValidationError(f"Formato de checkpoint desconocido en {path}")
    if meta.get('version') != ARTIFACT_CONFIG['format_version']:
        raise ValidationError(f"Versión de checkpoint no soportada: {meta.get('version')}")
    if kind is not None and meta.get('kind') != kind:
        raise ValidationError(f"Se esperaba un checkpoint '{kind}', se encontró '{meta.get('kind')}'")
    for name, shape in meta['shapes'].items():
        if list(arrays[name].shape) != shape:
            raise ShapeMismatchError(f"Forma inesperada para '{name}' en {path}")
    return arrays, meta


class BaseModel(ABC):
    """
    Clase base abstracta para los modelos entrenables
    Proporciona la serialización común de parámetros
    """

    @abstractmethod
    def get_model_name(self):
        """
        Retorna el tipo de modelo usado en los checkpoints

        Returns:
            str: Nombre del modelo
        """
        pass

    @abstractmethod
    def named_arrays(self):
        """
        Parámetros del modelo por nombre

        Returns:
            dict: nombre -> np.ndarray
        """
        pass

    @abstractmethod
    def restore_arrays(self, arrays):
        """Reemplazar los parámetros con arreglos cargados"""
        pass

    def save(self, path, seed=None, hash_value=None, extra=None):
        """Guardar los parámetros del modelo"""
        return save_checkpoint(path, self.named_arrays(), self.get_model_name(), seed, hash_value, extra)

    def load(self, path):
        """Cargar parámetros guardados con save()"""
        arrays, meta = load_checkpoint(path, self.get_model_name())
        self.restore_arrays(arrays)
        return meta


def mlp_arrays(prefix, params):
    """Aplanar un MlpParams en entradas nombradas"""
    arrays = {}
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        arrays[f"{prefix}.w{i}"] = w
        arrays[f"{prefix}.b{i}"] = b
    return arrays


def restore_mlp(prefix, params, arrays):
    """Copiar en sitio los arreglos nombrados de un MlpParams"""
    for i in range(len(params.weights)):
        params.weights[i][...] = arrays[f"{prefix}.w{i}"]
        params.biases[i][...] = arrays[f"{prefix}.b{i}"]
