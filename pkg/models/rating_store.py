"""
Tipos de datos de calificaciones y atributos sensibles
"""
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from config.settings import ARTIFACT_CONFIG, SPLIT_NAMES, SPLIT_TAGS
from utils.exceptions import IndexOutOfRangeError, MissingFileError, ValidationError

logger = logging.getLogger(__name__)

MISSING = -1


def _frozen(array, dtype):
    array = np.ascontiguousarray(array, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class RatingStore:
    """
    Tripletas (usuario, ítem, calificación) con etiqueta de partición

    Atributos:
        - user_count: número de usuarios M
        - item_count: número de ítems N
        - users, items: índices internos base 0
        - ratings: calificaciones normalizadas en [1, 5]
        - splits: 0 = train, 1 = validation, 2 = test
        - user_ids, item_ids: identificadores externos por índice interno
    """
    user_count: int
    item_count: int
    users: np.ndarray
    items: np.ndarray
    ratings: np.ndarray
    splits: np.ndarray
    user_ids: tuple = field(default=())
    item_ids: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'users', _frozen(self.users, np.int64))
        object.__setattr__(self, 'items', _frozen(self.items, np.int64))
        object.__setattr__(self, 'ratings', _frozen(self.ratings, np.float64))
        object.__setattr__(self, 'splits', _frozen(self.splits, np.int8))
        object.__setattr__(self, 'user_ids', tuple(self.user_ids))
        object.__setattr__(self, 'item_ids', tuple(self.item_ids))

        n = len(self.users)
        if not (len(self.items) == len(self.ratings) == len(self.splits) == n):
            raise ValidationError("Las columnas de la tienda de calificaciones tienen longitudes distintas")
        if n:
            if self.users.min() < 0 or self.users.max() >= self.user_count:
                raise IndexOutOfRangeError("Índice de usuario fuera de rango")
            if self.items.min() < 0 or self.items.max() >= self.item_count:
                raise IndexOutOfRangeError("Índice de ítem fuera de rango")
            if self.ratings.min() < 1.0 - 1e-9 or self.ratings.max() > 5.0 + 1e-9:
                raise ValidationError("Las calificaciones deben estar en [1, 5]")

    def __len__(self):
        return len(self.users)

    def triples(self, split='train'):
        """
        Obtener las tripletas de una partición

        Args:
            split (str|None): 'train', 'validation', 'test' o None para todas

        Returns:
            tuple: (users, items, ratings)
        """
        if split is None:
            return self.users, self.items, self.ratings
        mask = self.splits == SPLIT_TAGS[split.upper()]
        return self.users[mask], self.items[mask], self.ratings[mask]

    def split_counts(self):
        """Número de tripletas por partición"""
        return {name: int(np.sum(self.splits == tag)) for tag, name in SPLIT_NAMES.items()}

    def with_splits(self, splits):
        """Copia de la tienda con nuevas etiquetas de partición"""
        return RatingStore(
            self.user_count, self.item_count, self.users, self.items, self.ratings,
            splits, self.user_ids, self.item_ids
        )

    def save(self, directory):
        """
        Guardar la tienda como CSV más un archivo JSON de metadatos

        Args:
            directory (str): Directorio destino

        Returns:
            list: Rutas escritas
        """
        os.makedirs(directory, exist_ok=True)
        csv_path = os.path.join(directory, 'ratings.csv')
        meta_path = os.path.join(directory, 'ratings.json')
        frame = pd.DataFrame({
            'user': self.users,
            'item': self.items,
            'rating': self.ratings,
            'split': [SPLIT_NAMES[int(s)] for s in self.splits]
        })
        frame.to_csv(csv_path, index=False, float_format='%.10g', lineterminator='\n')
        meta = {
            'format_version': ARTIFACT_CONFIG['format_version'],
            'user_count': self.user_count,
            'item_count': self.item_count,
            'user_ids': [str(u) for u in self.user_ids],
            'item_ids': [str(v) for v in self.item_ids]
        }
        with open(meta_path, 'w', encoding='utf-8') as f:
            json.dump(meta, f, indent=1, sort_keys=True)
        logger.info(f"Tienda de calificaciones guardada en {directory} ({len(self)} tripletas)")
        return [csv_path, meta_path]

    @classmethod
    def load(cls, directory):
        """Cargar una tienda guardada con save()"""
        csv_path = os.path.join(directory, 'ratings.csv')
        meta_path = os.path.join(directory, 'ratings.json')
        if not (os.path.exists(csv_path) and os.path.exists(meta_path)):
            raise MissingFileError(f"No se encontró la tienda de calificaciones en {directory}")
        with open(meta_path, 'r', encoding='utf-8') as f:
            meta = json.load(f)
        frame = pd.read_csv(csv_path, dtype={'user': np.int64, 'item': np.int64, 'rating': np.float64, 'split': str})
        tags = {name: tag for tag, name in SPLIT_NAMES.items()}
        return cls(
            meta['user_count'], meta['item_count'],
            frame['user'].to_numpy(), frame['item'].to_numpy(), frame['rating'].to_numpy(),
            frame['split'].map(tags).to_numpy(), meta['user_ids'], meta['item_ids']
        )


@dataclass(frozen=True)
class AttributeTable:
    """
    Clases de atributos sensibles por usuario

    Atributos:
        - names: nombres de los K atributos
        - cardinalities: número de clases C_k de cada atributo
        - values: matriz (M, K) de índices de clase, -1 si falta
    """
    names: tuple
    cardinalities: tuple
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'names', tuple(self.names))
        object.__setattr__(self, 'cardinalities', tuple(int(c) for c in self.cardinalities))
        values = np.asarray(self.values, dtype=np.int64)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        object.__setattr__(self, 'values', _frozen(values, np.int64))

        if len(self.names) != len(self.cardinalities) or self.values.shape[1] != len(self.names):
            raise ValidationError("Nombres, cardinalidades y columnas de atributos no coinciden")
        for k, cardinality in enumerate(self.cardinalities):
            if cardinality < 2:
                raise ValidationError(f"El atributo '{self.names[k]}' necesita al menos 2 clases")
            column = self.values[:, k]
            if np.any(column >= cardinality) or np.any(column < MISSING):
                raise ValidationError(f"Índice de clase fuera de rango en '{self.names[k]}'")

    @property
    def attribute_count(self):
        return len(self.names)

    @property
    def user_count(self):
        return self.values.shape[0]

    def index_of(self, name):
        """Posición de un atributo por nombre"""
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"Atributo desconocido: {name}. Disponibles: {', '.join(self.names)}")

    def subset(self, names):
        """Tabla restringida a un subconjunto de atributos (ajuste composicional)"""
        if not names:
            return self
        columns = [self.index_of(n) for n in names]
        return AttributeTable(
            [self.names[c] for c in columns],
            [self.cardinalities[c] for c in columns],
            self.values[:, columns]
        )

    def labeled_mask(self):
        """Usuarios con al menos una etiqueta"""
        return np.any(self.values != MISSING, axis=1)

    def save(self, directory):
        """Guardar la tabla como CSV más metadatos JSON"""
        os.makedirs(directory, exist_ok=True)
        csv_path = os.path.join(directory, 'attributes.csv')
        meta_path = os.path.join(directory, 'attributes.json')
        frame = pd.DataFrame(self.values, columns=list(self.names))
        frame.insert(0, 'user', np.arange(self.user_count))
        frame.to_csv(csv_path, index=False, lineterminator='\n')
        with open(meta_path, 'w', encoding='utf-8') as f:
            json.dump({
                'format_version': ARTIFACT_CONFIG['format_version'],
                'names': list(self.names),
                'cardinalities': list(self.cardinalities)
            }, f, indent=1, sort_keys=True)
        return [csv_path, meta_path]

    @classmethod
    def load(cls, directory):
        """Cargar una tabla guardada con save()"""
        csv_path = os.path.join(directory, 'attributes.csv')
        meta_path = os.path.join(directory, 'attributes.json')
        if not (os.path.exists(csv_path) and os.path.exists(meta_path)):
            raise MissingFileError(f"No se encontró la tabla de atributos en {directory}")
        with open(meta_path, 'r', encoding='utf-8') as f:
            meta = json.load(f)
        frame = pd.read_csv(csv_path)
        return cls(meta['names'], meta['cardinalities'], frame[meta['names']].to_numpy())
