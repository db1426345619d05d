"""
Métricas de precisión y de equidad de grupo
"""
import logging

import numpy as np
import pandas as pd
from sklearn.metrics import f1_score, roc_auc_score

from models.rating_store import MISSING
from utils.exceptions import EmptyInputError, NoScoredItemsError, SingleClassError

logger = logging.getLogger(__name__)


def _paired(a, b):
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or a.size != b.size:
        raise EmptyInputError("Se requieren dos secuencias no vacías de igual longitud")
    return a, b


def rmse(predictions, truths):
    """Raíz del error cuadrático medio"""
    predictions, truths = _paired(predictions, truths)
    return float(np.sqrt(np.mean((predictions - truths) ** 2)))


def auc(scores, binary_labels):
    """
    AUC por rangos (Mann-Whitney); los empates reciben medio crédito

    Args:
        scores (array-like): Puntajes de la clase positiva
        binary_labels (array-like): Etiquetas 0/1

    Returns:
        float: AUC en [0, 1]
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(binary_labels).ravel()
    if scores.size == 0 or scores.size != labels.size:
        raise EmptyInputError("Puntajes y etiquetas deben tener la misma longitud no nula")
    if np.unique(labels).size < 2:
        raise SingleClassError("El AUC requiere ambas clases presentes")
    return float(roc_auc_score(labels, scores))


def micro_f1(predicted_classes, true_classes):
    """F1 micro-promediado; con una etiqueta por usuario equivale a la exactitud"""
    predicted = np.asarray(predicted_classes).ravel()
    truth = np.asarray(true_classes).ravel()
    if predicted.size == 0 or predicted.size != truth.size:
        raise EmptyInputError("Se requieren dos secuencias no vacías de igual longitud")
    return float(f1_score(truth, predicted, average='micro'))


def group_statistics(users, items, values, user_groups):
    """
    Media por (ítem, grupo) de un valor por par usuario-ítem

    Args:
        users (array-like): Usuarios de cada par
        items (array-like): Ítems de cada par
        values (array-like): Valor a promediar (predicción o error absoluto)
        user_groups (np.ndarray): Grupo de cada usuario, -1 si falta

    Returns:
        pd.DataFrame: Filas por ítem, columnas por grupo (NaN si el grupo no calificó)
    """
    users = np.asarray(users, dtype=np.int64)
    groups = np.asarray(user_groups, dtype=np.int64)[users]
    frame = pd.DataFrame({
        'item': np.asarray(items, dtype=np.int64),
        'group': groups,
        'value': np.asarray(values, dtype=np.float64)
    })
    frame = frame[frame['group'] != MISSING]
    if frame.empty:
        return pd.DataFrame()
    return frame.groupby(['item', 'group'])['value'].mean().unstack('group').sort_index()


def _group_disparity(table, cardinality, metric_name):
    if table.empty:
        raise NoScoredItemsError(f"{metric_name}: ningún par tiene grupo conocido")
    if cardinality == 2:
        present = table.reindex(columns=[0, 1])
        scored = present.dropna()
        per_item = (scored[0] - scored[1]).abs()
    else:
        present = table.reindex(columns=range(cardinality))
        scored = present[present.notna().any(axis=1)]
        per_item = scored.std(axis=1, ddof=0)
    skipped = len(table) - len(per_item)
    if per_item.empty:
        raise NoScoredItemsError(f"{metric_name}: ningún ítem tiene los grupos necesarios")
    if skipped:
        logger.info(f"{metric_name}: {skipped} ítems omitidos por falta de grupos")
    return float(per_item.mean()), skipped


def statistical_parity(users, items, predictions, user_groups, cardinality, return_skipped=False):
    """
    Paridad estadística de las predicciones entre grupos de usuarios

    Binario: promedio por ítem de |media grupo 0 - media grupo 1|, omitiendo
    ítems sin ambos grupos. Multivalor: desviación estándar de las medias de
    los grupos presentes en cada ítem, promediada sobre ítems.

    Args:
        users, items (array-like): Pares de prueba
        predictions (array-like): Calificaciones predichas
        user_groups (np.ndarray): Clase de cada usuario (-1 si falta)
        cardinality (int): Número de clases del atributo
        return_skipped (bool): Devolver también los ítems omitidos

    Returns:
        float|tuple: Valor >= 0 (y número de ítems omitidos)
    """
    table = group_statistics(users, items, predictions, user_groups)
    value, skipped = _group_disparity(table, cardinality, 'statistical_parity')
    return (value, skipped) if return_skipped else value


def equal_opportunity(users, items, predictions, truths, user_groups, cardinality, return_skipped=False):
    """
    Igualdad de oportunidad: paridad del error absoluto medio por grupo

    Args:
        users, items (array-like): Pares de prueba
        predictions, truths (array-like): Predicciones y calificaciones reales
        user_groups (np.ndarray): Clase de cada usuario (-1 si falta)
        cardinality (int): Número de clases del atributo
        return_skipped (bool): Devolver también los ítems omitidos

    Returns:
        float|tuple: Valor >= 0 (y número de ítems omitidos)
    """
    predictions, truths = _paired(predictions, truths)
    table = group_statistics(users, items, np.abs(predictions - truths), user_groups)
    value, skipped = _group_disparity(table, cardinality, 'equal_opportunity')
    return (value, skipped) if return_skipped else value
