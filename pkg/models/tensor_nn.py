"""
Numérica densa mínima: MLP con LeakyReLU, entropía cruzada softmax y Adam

Las matrices densas son arreglos float64 de numpy. Los pesos de cada capa
tienen forma (entrada, salida) y se aplican como z = x W + b, de modo que
una misma red procesa un vector (d,) o un lote (B, d).
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from utils.exceptions import ShapeMismatchError, ValidationError

logger = logging.getLogger(__name__)

ACTIVATIONS = ('leaky_relu', 'linear', 'softmax_output')
DEFAULT_SLOPE = 0.01


@dataclass
class MlpParams:
    """
    Parámetros de un perceptrón multicapa

    Atributos:
        - weights: matrices (d_in, d_out) por capa
        - biases: vectores (d_out,) por capa
        - activations: activación de cada capa
        - slope: pendiente negativa de LeakyReLU
    """
    weights: list
    biases: list
    activations: list
    slope: float = DEFAULT_SLOPE

    def __post_init__(self):
        if not (len(self.weights) == len(self.biases) == len(self.activations)) or not self.weights:
            raise ShapeMismatchError("Cada capa necesita pesos, sesgo y activación")
        if not 0.0 < self.slope < 1.0:
            raise ValidationError("La pendiente de LeakyReLU debe estar en (0, 1)")
        for i, (w, b, act) in enumerate(zip(self.weights, self.biases, self.activations)):
            if act not in ACTIVATIONS:
                raise ValidationError(f"Activación desconocida: {act}")
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ShapeMismatchError(f"Capa {i}: pesos {w.shape} y sesgo {b.shape} incompatibles")
            if i and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ShapeMismatchError(f"Capa {i}: la dimensión de entrada no encadena con la capa anterior")

    @property
    def input_dim(self):
        return self.weights[0].shape[0]

    @property
    def output_dim(self):
        return self.weights[-1].shape[1]

    @property
    def layer_sizes(self):
        return [self.input_dim] + [w.shape[1] for w in self.weights]

    def tensors(self):
        """Parámetros en orden fijo [W0, b0, W1, b1, ...]"""
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend([w, b])
        return out

    def copy(self):
        return MlpParams([w.copy() for w in self.weights], [b.copy() for b in self.biases],
                         list(self.activations), self.slope)


def seeded_init(shape, scheme, seed, scale=0.1):
    """
    Matriz pseudoaleatoria determinista

    Args:
        shape (tuple): Forma
        scheme (str): 'uniform' en (-scale, scale) o 'he_normal'
        seed (int|np.random.Generator): Semilla o generador
        scale (float): Cota a del esquema uniforme

    Returns:
        np.ndarray: Matriz inicializada
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if scheme == 'uniform':
        return rng.uniform(-scale, scale, size=shape)
    if scheme == 'he_normal':
        fan_in = shape[0] if len(shape) > 1 else 1
        return rng.standard_normal(shape) * np.sqrt(2.0 / fan_in)
    raise ValidationError(f"Esquema de inicialización desconocido: {scheme}")


def build_mlp(layer_sizes, seed, slope=DEFAULT_SLOPE, output_activation='linear'):
    """
    Construir un MLP con capas ocultas LeakyReLU

    Args:
        layer_sizes (list): [d_in, h_1, ..., d_out]
        seed (int|np.random.Generator): Semilla
        slope (float): Pendiente de LeakyReLU
        output_activation (str): Activación de la última capa

    Returns:
        MlpParams: Pesos He-normal y sesgos en cero
    """
    if len(layer_sizes) < 2:
        raise ShapeMismatchError("Un MLP necesita al menos dimensión de entrada y de salida")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights, biases, activations = [], [], []
    for i in range(len(layer_sizes) - 1):
        weights.append(seeded_init((layer_sizes[i], layer_sizes[i + 1]), 'he_normal', rng))
        biases.append(np.zeros(layer_sizes[i + 1]))
        activations.append(output_activation if i == len(layer_sizes) - 2 else 'leaky_relu')
    return MlpParams(weights, biases, activations, slope)


def leaky_relu(x, slope=DEFAULT_SLOPE):
    return np.where(x > 0, x, slope * x)


def softmax(logits):
    """Softmax estabilizado restando el máximo por fila"""
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def mlp_forward(params, inputs):
    """
    Propagación hacia adelante

    Args:
        params (MlpParams): Red
        inputs (np.ndarray): Vector (d,) o lote (B, d)

    Returns:
        tuple: (salida, caché para mlp_backward)
    """
    x = np.asarray(inputs, dtype=np.float64)
    if x.shape[-1] != params.input_dim:
        raise ShapeMismatchError(f"Entrada de dimensión {x.shape[-1]}, la red espera {params.input_dim}")
    cache = []
    for w, b, act in zip(params.weights, params.biases, params.activations):
        z = x @ w + b
        if act == 'leaky_relu':
            out = leaky_relu(z, params.slope)
        elif act == 'softmax_output':
            out = softmax(z)
        else:
            out = z
        cache.append((x, z, out))
        x = out
    return x, cache


def mlp_backward(params, cache, output_gradient):
    """
    Gradientes en modo reverso de la composición afín + activación

    Args:
        params (MlpParams): Red usada en la pasada hacia adelante
        cache (list): Caché devuelta por mlp_forward
        output_gradient (np.ndarray): dL/d salida con la forma de la salida

    Returns:
        tuple: (gradientes en el orden de params.tensors(), dL/d entrada)
    """
    if len(cache) != len(params.weights):
        raise ShapeMismatchError("La caché no corresponde a esta red")
    grad = np.asarray(output_gradient, dtype=np.float64)
    if grad.shape != cache[-1][2].shape:
        raise ShapeMismatchError(f"Gradiente de salida {grad.shape}, se esperaba {cache[-1][2].shape}")

    grads = [None] * (2 * len(params.weights))
    for i in reversed(range(len(params.weights))):
        x, z, out = cache[i]
        act = params.activations[i]
        if act == 'leaky_relu':
            dz = grad * np.where(z > 0, 1.0, params.slope)
        elif act == 'softmax_output':
            dz = out * (grad - np.sum(grad * out, axis=-1, keepdims=True))
        else:
            dz = grad
        if x.ndim == 1:
            grads[2 * i] = np.outer(x, dz)
            grads[2 * i + 1] = dz.copy()
        else:
            grads[2 * i] = x.T @ dz
            grads[2 * i + 1] = dz.sum(axis=0)
        grad = dz @ params.weights[i].T
    return grads, grad


def softmax_cross_entropy(logits, target):
    """
    Entropía cruzada -ln softmax(logits)[target]

    Args:
        logits (np.ndarray): Vector (C,) o lote (B, C)
        target (int|np.ndarray): Clase o clases objetivo

    Returns:
        tuple: (pérdida total, gradiente softmax - one_hot)
    """
    logits = np.asarray(logits, dtype=np.float64)
    single = logits.ndim == 1
    batch = logits.reshape(1, -1) if single else logits
    targets = np.atleast_1d(np.asarray(target, dtype=np.int64))
    if len(targets) != batch.shape[0]:
        raise ShapeMismatchError("Número de objetivos distinto al de filas de logits")
    if batch.shape[0] and (targets.min() < 0 or targets.max() >= batch.shape[1]):
        raise ShapeMismatchError("Clase objetivo fuera de rango")

    shifted = batch - np.max(batch, axis=1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=1))
    rows = np.arange(batch.shape[0])
    loss = float(np.sum(log_norm - shifted[rows, targets]))
    grad = np.exp(shifted - log_norm[:, None])
    grad[rows, targets] -= 1.0
    return loss, (grad[0] if single else grad)


@dataclass
class AdamState:
    """Momentos de Adam por parámetro"""
    first_moments: list
    second_moments: list
    step: int = 0
    learning_rate: float = 0.005
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def for_params(cls, params, learning_rate=0.005, beta1=0.9, beta2=0.999, epsilon=1e-8):
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params],
                   0, learning_rate, beta1, beta2, epsilon)


def adam_step(state, params, gradients):
    """
    Paso de Adam con corrección de sesgo; actualiza los arreglos en sitio

    Args:
        state (AdamState): Estado del optimizador
        params (list): Arreglos de parámetros
        gradients (list): Gradientes con las mismas formas

    Returns:
        tuple: (params, state)
    """
    if not (len(params) == len(gradients) == len(state.first_moments)):
        raise ShapeMismatchError("Número de parámetros, gradientes y momentos distinto")
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for p, g, m, v in zip(params, gradients, state.first_moments, state.second_moments):
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeMismatchError(f"Forma de gradiente {g.shape} distinta a la del parámetro {p.shape}")
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= state.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + state.epsilon)
    return params, state
