"""
Oráculo de diferencias finitas centrales para verificar gradientes
"""
import logging

import numpy as np

logger = logging.getLogger(__name__)


def numerical_gradient(objective, array, step=1e-4, indices=None):
    """
    Gradiente numérico de una función escalar respecto a un arreglo

    El arreglo se perturba en sitio y se restaura después de cada evaluación.

    Args:
        objective (callable): Función sin argumentos que devuelve un escalar
        array (np.ndarray): Parámetro a perturbar
        step (float): Paso h de (f(x+h) - f(x-h)) / 2h
        indices (list|None): Posiciones a evaluar; None evalúa todas

    Returns:
        np.ndarray: Gradiente (ceros fuera de `indices`)
    """
    grad = np.zeros_like(array, dtype=np.float64)
    positions = indices if indices is not None else list(np.ndindex(array.shape))
    for index in positions:
        original = array[index]
        array[index] = original + step
        plus = objective()
        array[index] = original - step
        minus = objective()
        array[index] = original
        grad[index] = (plus - minus) / (2.0 * step)
    return grad


def relative_error(analytic, numeric, floor=1e-8):
    """Error relativo máximo |a - n| / max(|a| + |n|, floor)"""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denominator = np.maximum(np.abs(analytic) + np.abs(numeric), floor)
    return float(np.max(np.abs(analytic - numeric) / denominator)) if analytic.size else 0.0


def check_gradients(objective, params, grads, step=1e-4, samples=None, seed=0, floor=1e-6):
    """
    Comparar gradientes analíticos contra diferencias finitas

    Args:
        objective (callable): Pérdida escalar evaluada con los parámetros actuales
        params (list): Arreglos de parámetros
        grads (list): Gradientes analíticos en el mismo orden
        step (float): Paso de diferencias
        samples (int|None): Posiciones aleatorias por arreglo; None usa todas
        seed (int): Semilla del muestreo de posiciones
        floor (float): Denominador mínimo del error relativo

    Returns:
        float: Peor error relativo encontrado
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, g in zip(params, grads):
        positions = list(np.ndindex(p.shape))
        if samples is not None and len(positions) > samples:
            positions = [positions[i] for i in rng.choice(len(positions), size=samples, replace=False)]
        numeric = numerical_gradient(objective, p, step, positions)
        analytic = np.array([g[i] for i in positions])
        worst = max(worst, relative_error(analytic, np.array([numeric[i] for i in positions]), floor))
    logger.debug(f"Peor error relativo de gradiente: {worst:.3e}")
    return worst
