"""
Modelo del reporte de métricas de una corrida
"""
import json
import logging
import math
from dataclasses import dataclass, field

from config.settings import ARTIFACT_CONFIG
from utils.exceptions import MetricError

logger = logging.getLogger(__name__)

DECIMALS = 6


def _rounded(value):
    if isinstance(value, float):
        return round(value, DECIMALS) if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    return value


@dataclass(frozen=True)
class LeakageEntry:
    """Resultado del atacante para una representación y un atributo"""
    representation: str
    attribute: str
    metric: str
    value: float

    def __post_init__(self):
        if self.metric not in ('auc', 'micro_f1'):
            raise MetricError(f"Métrica de fuga desconocida: {self.metric}")
        if not 0.0 <= self.value <= 1.0:
            raise MetricError(f"{self.metric} fuera de [0, 1]: {self.value}")


@dataclass
class MetricsReport:
    """
    Métricas de precisión, fuga y equidad de grupo

    Atributos:
        - rmse: RMSE de prueba con embeddings filtrados
        - base_rmse: RMSE de prueba con embeddings originales
        - leakage: lista de LeakageEntry
        - statistical_parity / equal_opportunity: atributo -> valor >= 0
        - skipped_items: atributo -> ítems omitidos por falta de grupos
        - metadata: semillas, hash de configuración y marcas de la corrida
    """
    rmse: float
    base_rmse: float = None
    leakage: list = field(default_factory=list)
    statistical_parity: dict = field(default_factory=dict)
    equal_opportunity: dict = field(default_factory=dict)
    skipped_items: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, table in (('statistical_parity', self.statistical_parity),
                            ('equal_opportunity', self.equal_opportunity)):
            for attribute, value in table.items():
                if value < 0:
                    raise MetricError(f"{name} de '{attribute}' no puede ser negativo")

    def headline(self, representation='filtered'):
        """Claves <atributo>_auc / <atributo>_f1 de una representación"""
        keys = {}
        for entry in self.leakage:
            if entry.representation == representation:
                suffix = 'auc' if entry.metric == 'auc' else 'f1'
                keys[f"{entry.attribute}_{suffix}"] = entry.value
        return keys

    def to_dict(self):
        data = {
            'version': ARTIFACT_CONFIG['format_version'],
            'rmse': self.rmse,
            'base_rmse': self.base_rmse,
            'statistical_parity': dict(self.statistical_parity),
            'equal_opportunity': dict(self.equal_opportunity),
            'skipped_items': dict(self.skipped_items),
            'leakage': [
                {'representation': e.representation, 'attribute': e.attribute,
                 'metric': e.metric, 'value': e.value}
                for e in self.leakage
            ],
            'metadata': dict(self.metadata)
        }
        data.update(self.headline())
        return _rounded(data)

    def to_json(self):
        """JSON canónico: claves ordenadas y reales con 6 decimales"""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + '\n'

    def save(self, path):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.to_json())
        logger.info(f"Reporte de métricas guardado en {path}")
        return path

    @classmethod
    def from_dict(cls, data):
        return cls(
            rmse=data['rmse'],
            base_rmse=data.get('base_rmse'),
            leakage=[LeakageEntry(**entry) for entry in data.get('leakage', [])],
            statistical_parity=data.get('statistical_parity', {}),
            equal_opportunity=data.get('equal_opportunity', {}),
            skipped_items=data.get('skipped_items', {}),
            metadata=data.get('metadata', {})
        )

    @classmethod
    def load(cls, path):
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_dict(json.load(f))
