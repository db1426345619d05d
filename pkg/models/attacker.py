"""
Auditoría de fuga de atributos sensibles con un atacante lineal softmax

El atacante se entrena sobre el 80% de los usuarios etiquetados y se evalúa
sobre el 20% restante. Atributos binarios reportan AUC y multiclase F1 micro.
"""
import logging
from dataclasses import dataclass

import numpy as np
from sklearn.model_selection import train_test_split
from sklearn.preprocessing import StandardScaler

from models.metrics import auc, micro_f1
from models.rating_store import MISSING
from models.tensor_nn import AdamState, adam_step, build_mlp, mlp_backward, mlp_forward, softmax, softmax_cross_entropy
from utils.exceptions import InsufficientLabelsError, ShapeMismatchError

logger = logging.getLogger(__name__)


@dataclass
class AttackerConfig:
    """Hiperparámetros del clasificador atacante"""
    epochs: int = 500
    learning_rate: float = 0.01
    l2: float = 1e-4
    patience: int = 25
    test_size: float = 0.2
    validation_size: float = 0.1
    tolerance: float = 1e-6


def _split(features, labels, test_size, seed):
    try:
        return train_test_split(features, labels, test_size=test_size, random_state=seed, stratify=labels)
    except ValueError as e:
        raise InsufficientLabelsError(f"No es posible una partición estratificada: {e}") from e


def _check_classes(labels, classes, split_name):
    counts = np.array([np.sum(labels == c) for c in classes])
    if np.any(counts < 2):
        raise InsufficientLabelsError(
            f"Se requieren al menos 2 usuarios por clase en la partición {split_name}: {counts.tolist()}"
        )


def _mean_loss(params, features, labels, l2):
    logits, cache = mlp_forward(params, features)
    loss, d_logits = softmax_cross_entropy(logits, labels)
    n = len(labels)
    grads, _ = mlp_backward(params, cache, d_logits / n)
    grads[0] = grads[0] + 2.0 * l2 * params.weights[0]
    return loss / n + l2 * float(np.sum(params.weights[0] ** 2)), grads


def fit_attacker(features, labels, cardinality, seed, config=None):
    """
    Entrenar el clasificador lineal softmax con Adam a lote completo

    Se detiene cuando la pérdida de validación interna deja de mejorar
    durante `patience` épocas y restaura los mejores parámetros.

    Returns:
        MlpParams: Clasificador de una capa
    """
    config = config or AttackerConfig()
    rng = np.random.default_rng(seed)
    params = build_mlp([features.shape[1], cardinality], rng)
    monitor_x, monitor_y = features, labels
    fit_x, fit_y = features, labels
    if np.min(np.bincount(labels)[np.unique(labels)]) >= 10:
        fit_x, monitor_x, fit_y, monitor_y = train_test_split(
            features, labels, test_size=config.validation_size, random_state=seed, stratify=labels
        )

    optimizer = AdamState.for_params(params.tensors(), config.learning_rate)
    best_loss, best, waited = np.inf, params.copy(), 0
    for epoch in range(config.epochs):
        _, grads = _mean_loss(params, fit_x, fit_y, config.l2)
        adam_step(optimizer, params.tensors(), grads)
        monitor_loss, _ = _mean_loss(params, monitor_x, monitor_y, config.l2)
        if monitor_loss < best_loss - config.tolerance:
            best_loss, best, waited = monitor_loss, params.copy(), 0
        else:
            waited += 1
            if waited >= config.patience:
                logger.debug(f"Atacante detenido en la época {epoch + 1} (pérdida {best_loss:.4f})")
                break
    return best


def attack_attribute(features, labels, cardinality, seed, config=None):
    """
    Fuga de un atributo: AUC (binario) o F1 micro (multiclase)

    Args:
        features (np.ndarray): (M, D) un vector por usuario
        labels (np.ndarray): (M,) clase por usuario, -1 si falta
        cardinality (int): Número de clases C_k
        seed (int): Semilla de partición e inicialización
        config (AttackerConfig|None): Hiperparámetros

    Returns:
        tuple: (nombre de la métrica, valor)
    """
    config = config or AttackerConfig()
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2 or len(features) != len(labels):
        raise ShapeMismatchError("Se requiere un vector de características por usuario")
    labeled = labels != MISSING
    x, y = features[labeled], labels[labeled]
    classes = np.unique(y)
    if len(classes) < 2:
        raise InsufficientLabelsError("El atacante necesita al menos dos clases etiquetadas")

    x_train, x_test, y_train, y_test = _split(x, y, config.test_size, seed)
    _check_classes(y_train, classes, 'de entrenamiento')
    _check_classes(y_test, classes, 'de prueba')

    scaler = StandardScaler().fit(x_train)
    x_train, x_test = scaler.transform(x_train), scaler.transform(x_test)
    attacker = fit_attacker(x_train, y_train, cardinality, seed, config)
    logits, _ = mlp_forward(attacker, x_test)
    if cardinality == 2:
        return 'auc', auc(softmax(logits)[:, 1], y_test)
    return 'micro_f1', micro_f1(np.argmax(logits, axis=1), y_test)


def leakage_audit(features, attributes, seed, config=None):
    """
    Auditar la fuga de todos los atributos de una tabla

    Args:
        features (np.ndarray): (M, D) f_u, e_u o cualquier h^l de usuarios
        attributes (AttributeTable): Atributos sensibles
        seed (int): Semilla del atacante
        config (AttackerConfig|None): Hiperparámetros

    Returns:
        dict: nombre del atributo -> (métrica, valor)
    """
    if len(features) != attributes.user_count:
        raise ShapeMismatchError(
            f"{len(features)} vectores para {attributes.user_count} usuarios de la tabla de atributos"
        )
    results = {}
    for k, name in enumerate(attributes.names):
        results[name] = attack_attribute(features, attributes.values[:, k], attributes.cardinalities[k], seed, config)
    return results


def leakage_audit_repeated(features, attributes, seeds, config=None):
    """
    Media de leakage_audit sobre varias semillas del atacante

    Returns:
        dict: nombre del atributo -> (métrica, valor medio)
    """
    runs = [leakage_audit(features, attributes, seed, config) for seed in seeds]
    merged = {}
    for name in attributes.names:
        metric = runs[0][name][0]
        merged[name] = (metric, float(np.mean([run[name][1] for run in runs])))
        logger.info(f"Fuga de '{name}': {metric} {merged[name][1]:.4f} ({len(runs)} semillas)")
    return merged
