"""
Modelos base de recomendación: PMF y GCN ponderado por calificaciones

Ambos producen la matriz de embeddings original E (M usuarios seguidos de
N ítems) con la predicción r_uv = e_u^T e_v. Estos embeddings quedan
congelados como entrada del filtrado justo.
"""
import logging
from dataclasses import dataclass

import numpy as np

from models.base_model import BaseModel, load_checkpoint, save_checkpoint
from models.metrics import rmse
from models.tensor_nn import AdamState, adam_step, seeded_init
from utils.exceptions import (DivergenceDetectedError, EmptyTrainingSetError,
                              IndexOutOfRangeError, ShapeMismatchError)

logger = logging.getLogger(__name__)


@dataclass
class BaseTrainConfig:
    """Hiperparámetros del entrenamiento de los modelos base"""
    epochs: int = 30
    batch_size: int = 1024
    learning_rate: float = 0.005
    l2: float = 1e-4
    dim: int = 64
    layers: int = 2
    seed: int = 2021
    init_scale: float = 0.1


@dataclass
class EmbeddingMatrix:
    """
    Un vector D-dimensional por nodo: usuarios 0..M-1, ítems M..M+N-1
    """
    values: np.ndarray
    user_count: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or not np.all(np.isfinite(self.values)):
            raise ShapeMismatchError("Los embeddings deben ser una matriz finita (nodos, D)")

    @property
    def dimension(self):
        return self.values.shape[1]

    @property
    def item_count(self):
        return self.values.shape[0] - self.user_count

    @property
    def users(self):
        return self.values[:self.user_count]

    @property
    def items(self):
        return self.values[self.user_count:]

    def save(self, path, kind='embeddings', seed=None, hash_value=None):
        return save_checkpoint(path, {'values': self.values}, kind, seed, hash_value,
                               {'user_count': self.user_count})

    @classmethod
    def load(cls, path, kind='embeddings'):
        arrays, meta = load_checkpoint(path, kind)
        return cls(arrays['values'], meta['extra']['user_count'])


def predict_rating(embeddings, u, v):
    """
    Producto interno e_u^T e_v

    Args:
        embeddings (EmbeddingMatrix): Embeddings de usuarios e ítems
        u (int): Usuario
        v (int): Ítem (índice local 0..N-1)

    Returns:
        float: Calificación predicha
    """
    if not 0 <= u < embeddings.user_count or not 0 <= v < embeddings.item_count:
        raise IndexOutOfRangeError(f"Par ({u}, {v}) fuera de rango")
    return float(embeddings.users[u] @ embeddings.items[v])


def predict_pairs(embeddings, users, items):
    """Predicciones vectorizadas para pares (usuario, ítem)"""
    return np.einsum('ij,ij->i', embeddings.users[users], embeddings.items[items])


class EmbeddingRecommender(BaseModel):
    """
    Embeddings libres entrenados con pérdida cuadrática por mini-lotes y Adam

    Las subclases definen cómo se obtienen los embeddings finales a partir
    de los embeddings libres (ego).
    """

    def __init__(self, user_count, item_count, config):
        self.user_count = user_count
        self.item_count = item_count
        self.config = config
        rng = np.random.default_rng(config.seed)
        self.ego = seeded_init((user_count + item_count, config.dim), 'uniform', rng, config.init_scale)

    def parameters(self):
        return [self.ego]

    def forward(self):
        """Embeddings finales y caché"""
        return self.ego, None

    def backward(self, cache, grad_embeddings):
        """Gradientes de los parámetros dada dL/dE"""
        return [grad_embeddings]

    def named_arrays(self):
        return {f"param{i}": p for i, p in enumerate(self.parameters())}

    def restore_arrays(self, arrays):
        for i, p in enumerate(self.parameters()):
            p[...] = arrays[f"param{i}"]

    def embeddings(self):
        values, _ = self.forward()
        return EmbeddingMatrix(values.copy(), self.user_count)

    def loss_and_gradients(self, users, items, ratings):
        """
        Pérdida cuadrática media del lote más L2 sobre los embeddings libres

        Args:
            users (np.ndarray): Usuarios del lote
            items (np.ndarray): Ítems del lote (índices locales)
            ratings (np.ndarray): Calificaciones

        Returns:
            tuple: (pérdida, gradientes en el orden de parameters())
        """
        batch = len(ratings)
        nodes_v = self.user_count + items
        values, cache = self.forward()
        eu, ev = values[users], values[nodes_v]
        error = np.einsum('ij,ij->i', eu, ev) - ratings
        ego_u, ego_v = self.ego[users], self.ego[nodes_v]
        l2 = self.config.l2
        loss = float(np.mean(error ** 2) + l2 * (np.sum(ego_u ** 2) + np.sum(ego_v ** 2)) / batch)

        scale = (2.0 * error / batch)[:, None]
        grad_values = np.zeros_like(values)
        np.add.at(grad_values, users, scale * ev)
        np.add.at(grad_values, nodes_v, scale * eu)
        grads = self.backward(cache, grad_values)
        if l2:
            np.add.at(grads[0], users, (2.0 * l2 / batch) * ego_u)
            np.add.at(grads[0], nodes_v, (2.0 * l2 / batch) * ego_v)
        return loss, grads

    def evaluate(self, users, items, ratings):
        """RMSE con los parámetros actuales"""
        return rmse(predict_pairs(self.embeddings(), users, items), ratings)

    def fit(self, store):
        """
        Entrenar sobre las tripletas de train de la tienda

        Si existe partición de validación se conserva la mejor época según
        su RMSE.

        Args:
            store (RatingStore): Calificaciones particionadas

        Returns:
            list: Curva [{'epoch', 'train_rmse', 'validation_rmse'}]
        """
        users, items, ratings = store.triples('train')
        if len(ratings) == 0:
            raise EmptyTrainingSetError("No hay tripletas de entrenamiento")
        val_users, val_items, val_ratings = store.triples('validation')
        has_validation = len(val_ratings) > 0

        shuffle = np.random.default_rng(self.config.seed + 1)
        optimizer = AdamState.for_params(self.parameters(), self.config.learning_rate)
        curve, best_rmse, best_params = [], np.inf, None
        name = self.get_model_name()

        for epoch in range(1, self.config.epochs + 1):
            order = shuffle.permutation(len(ratings))
            for start in range(0, len(order), self.config.batch_size):
                batch = order[start:start + self.config.batch_size]
                loss, grads = self.loss_and_gradients(users[batch], items[batch], ratings[batch])
                if not np.isfinite(loss):
                    raise DivergenceDetectedError(f"{name}: pérdida no finita en la época {epoch}")
                adam_step(optimizer, self.parameters(), grads)

            entry = {'epoch': epoch, 'train_rmse': self.evaluate(users, items, ratings)}
            if has_validation:
                entry['validation_rmse'] = self.evaluate(val_users, val_items, val_ratings)
                if entry['validation_rmse'] < best_rmse:
                    best_rmse = entry['validation_rmse']
                    best_params = [p.copy() for p in self.parameters()]
            curve.append(entry)
            logger.info(
                f"{name} época {epoch}: RMSE train {entry['train_rmse']:.4f}"
                + (f", validación {entry['validation_rmse']:.4f}" if has_validation else "")
            )

        if best_params is not None:
            for p, best in zip(self.parameters(), best_params):
                p[...] = best
            logger.info(f"{name}: se restauró la mejor época (RMSE validación {best_rmse:.4f})")
        return curve


class PMFRecommender(EmbeddingRecommender):
    """Factorización matricial probabilística con embeddings libres"""

    def get_model_name(self):
        return 'pmf'


class GCNRecommender(EmbeddingRecommender):
    """
    Convolución lineal sobre el grafo bipartito ponderada por calificaciones

    h^{l+1} = P h^l W_l con P la adyacencia normalizada por filas y
    e = media(h^0, ..., h^L). Un nodo sin aristas conserva su vector h^0 en
    todas las capas.
    """

    def __init__(self, user_count, item_count, adjacency, config):
        super().__init__(user_count, item_count, config)
        self.propagation = adjacency.normalized
        self.isolated = adjacency.isolated
        self.layer_maps = [np.eye(config.dim) for _ in range(config.layers)]

    def get_model_name(self):
        return 'gcn'

    def parameters(self):
        return [self.ego] + self.layer_maps

    def forward(self):
        if not self.layer_maps:
            return self.ego, None
        hidden, propagated = [self.ego], []
        for w in self.layer_maps:
            mixed = self.propagation @ hidden[-1]
            propagated.append(mixed)
            layer = mixed @ w
            layer[self.isolated] = self.ego[self.isolated]
            hidden.append(layer)
        return np.mean(np.stack(hidden), axis=0), propagated

    def backward(self, cache, grad_embeddings):
        if not self.layer_maps:
            return [grad_embeddings]
        share = grad_embeddings / (len(self.layer_maps) + 1)
        upstream = share
        grad_ego = np.zeros_like(share)
        grad_maps = [None] * len(self.layer_maps)
        for layer in reversed(range(len(self.layer_maps))):
            grad_ego[self.isolated] += upstream[self.isolated]
            connected = upstream.copy()
            connected[self.isolated] = 0.0
            grad_maps[layer] = cache[layer].T @ connected
            upstream = share + self.propagation.T @ (connected @ self.layer_maps[layer].T)
        return [upstream + grad_ego] + grad_maps


def train_pmf(store, config, return_curve=False):
    """
    Entrenar PMF

    Returns:
        EmbeddingMatrix|tuple: Embeddings (y la curva si return_curve)
    """
    model = PMFRecommender(store.user_count, store.item_count, config)
    curve = model.fit(store)
    return (model.embeddings(), curve) if return_curve else model.embeddings()


def train_gcn(store, adjacency, config, return_curve=False):
    """
    Entrenar el codificador GCN sobre la adyacencia de entrenamiento

    Returns:
        EmbeddingMatrix|tuple: Embeddings (y la curva si return_curve)
    """
    model = GCNRecommender(store.user_count, store.item_count, adjacency, config)
    curve = model.fit(store)
    return (model.embeddings(), curve) if return_curve else model.embeddings()
