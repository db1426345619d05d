"""
Grafo bipartito usuario-ítem ponderado por calificaciones
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from utils.exceptions import NodeOutOfRangeError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BipartiteAdjacency:
    """
    Adyacencia simétrica [[0, R], [R^T, 0]] sobre M + N nodos

    Los usuarios ocupan los nodos 0..M-1 y los ítems M..M+N-1.
    """
    user_count: int
    item_count: int
    matrix: sp.csr_matrix

    @property
    def node_count(self):
        return self.user_count + self.item_count

    @property
    def edge_count(self):
        return int(self.matrix.nnz)

    @cached_property
    def degrees(self):
        """Número de vecinos por nodo"""
        return np.diff(self.matrix.indptr)

    @cached_property
    def weight_sums(self):
        """Suma de pesos a_ij por fila"""
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    @cached_property
    def normalized(self):
        """Adyacencia normalizada por filas; las filas aisladas quedan en cero"""
        sums = self.weight_sums
        inverse = np.divide(1.0, sums, out=np.zeros_like(sums), where=sums > 0)
        return sp.csr_matrix(sp.diags(inverse) @ self.matrix)

    @cached_property
    def isolated(self):
        """Nodos sin aristas de entrenamiento"""
        return self.weight_sums <= 0

    def check_node(self, node):
        if not 0 <= node < self.node_count:
            raise NodeOutOfRangeError(f"Nodo {node} fuera de rango [0, {self.node_count})")

    def neighbors(self, node):
        """
        Vecinos directos de un nodo

        Returns:
            tuple: (índices de vecinos, pesos a_ij)
        """
        self.check_node(node)
        start, end = self.matrix.indptr[node], self.matrix.indptr[node + 1]
        return self.matrix.indices[start:end].copy(), self.matrix.data[start:end].copy()


def build_adjacency(store):
    """
    Construir la adyacencia bipartita a partir de las tripletas de entrenamiento

    Args:
        store (RatingStore): Tienda con particiones

    Returns:
        BipartiteAdjacency: a(u, M+v) = a(M+v, u) = r_uv
    """
    users, items, ratings = store.triples('train')
    m, n = store.user_count, store.item_count
    rows = np.concatenate([users, m + items])
    cols = np.concatenate([m + items, users])
    data = np.concatenate([ratings, ratings])
    matrix = sp.csr_matrix((data, (rows, cols)), shape=(m + n, m + n))
    matrix.sort_indices()
    adjacency = BipartiteAdjacency(m, n, matrix)
    logger.info(f"Adyacencia bipartita: {m + n} nodos, {adjacency.edge_count} aristas dirigidas")
    return adjacency


def normalized_adjacency(adjacency):
    """Fila i = a_i / sum_j a_ij (CSR)"""
    return adjacency.normalized


def ego_neighbors(adjacency, node, order):
    """
    Vecindario ego-céntrico por saltos

    El salto l contiene los vecinos de los nodos del salto l-1; el peso de
    cada nodo es la suma de los pesos de las aristas que llegan desde el
    salto anterior.

    Args:
        adjacency (BipartiteAdjacency): Grafo
        node (int): Nodo ego
        order (int): Número de saltos

    Returns:
        list: [(nodos, pesos)] para cada salto 1..order
    """
    adjacency.check_node(node)
    if order < 1:
        raise ValidationError("El orden del vecindario debe ser >= 1")

    hops = []
    frontier = np.zeros(adjacency.node_count)
    frontier[node] = 1.0
    for _ in range(order):
        reached = adjacency.matrix.T @ frontier
        nodes = np.flatnonzero(reached)
        hops.append((nodes, reached[nodes]))
        frontier = np.zeros(adjacency.node_count)
        frontier[nodes] = 1.0
    return hops


@dataclass(frozen=True)
class EgoLayer:
    """Bloque de propagación normalizado de los nodos `rows` hacia `cols`"""
    rows: np.ndarray
    cols: np.ndarray
    matrix: sp.csr_matrix


def _sample_rows(adjacency, rows, cap, rng):
    indptr, indices, data = adjacency.matrix.indptr, adjacency.matrix.indices, adjacency.matrix.data
    out_rows, out_cols, out_data = [], [], []
    for position, node in enumerate(rows):
        start, end = indptr[node], indptr[node + 1]
        neighbors, weights = indices[start:end], data[start:end]
        if len(neighbors) > cap:
            chosen = np.sort(rng.choice(len(neighbors), size=cap, replace=False))
            neighbors, weights = neighbors[chosen], weights[chosen]
        total = weights.sum()
        if total > 0:
            out_rows.append(np.full(len(neighbors), position))
            out_cols.append(neighbors)
            out_data.append(weights / total)
    if not out_rows:
        return np.empty(0, dtype=np.int64), sp.csr_matrix((len(rows), 0))
    out_rows = np.concatenate(out_rows)
    out_cols = np.concatenate(out_cols)
    out_data = np.concatenate(out_data)
    cols, local = np.unique(out_cols, return_inverse=True)
    return cols, sp.csr_matrix((out_data, (out_rows, local)), shape=(len(rows), len(cols)))


def sample_ego_layers(adjacency, users, order, cap, rng):
    """
    Bloques de propagación por salto para un lote de usuarios

    Un nodo con grado <= cap usa su vecindario exacto sin consumir
    aleatoriedad; con grado mayor se submuestrean `cap` vecinos.

    Args:
        adjacency (BipartiteAdjacency): Grafo
        users (np.ndarray): Nodos ego
        order (int): Orden L
        cap (int): Máximo de vecinos por nodo y salto
        rng (np.random.Generator): Generador para el submuestreo

    Returns:
        list: L bloques EgoLayer; layers[0].rows == users
    """
    layers = []
    rows = np.asarray(users, dtype=np.int64)
    for _ in range(order):
        if rows.size == 0 or adjacency.degrees[rows].max(initial=0) <= cap:
            block = adjacency.normalized[rows]
            cols = np.unique(block.indices)
            block = sp.csr_matrix(block[:, cols])
        else:
            cols, block = _sample_rows(adjacency, rows, cap, rng)
        layers.append(EgoLayer(rows, cols, block))
        rows = cols
    return layers
