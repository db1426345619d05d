"""
Filtrado justo de embeddings mediante entrenamiento adversarial sobre grafos

Un banco de K sub-filtros lleva los embeddings originales (congelados) a un
espacio filtrado; K discriminadores intentan recuperar cada atributo
sensible a partir del embedding filtrado del usuario y de un resumen de su
red ego-céntrica. Los filtros maximizan V_R - lambda * V_G y los
discriminadores maximizan V_G = V_N + V_S, alternando mini-lotes.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from models.base_model import BaseModel, load_checkpoint, mlp_arrays, restore_mlp
from models.bipartite_graph import normalized_adjacency, sample_ego_layers
from models.metrics import rmse
from models.rating_store import MISSING
from models.recommenders import EmbeddingMatrix, predict_pairs
from models.tensor_nn import (DEFAULT_SLOPE, AdamState, adam_step, build_mlp, mlp_backward,
                              mlp_forward, softmax, softmax_cross_entropy)
from utils.exceptions import (DivergenceDetectedError, EmptyTrainingSetError,
                              MissingAttributeError, NoLabeledUsersError,
                              NodeOutOfRangeError, ShapeMismatchError, ValidationError)

logger = logging.getLogger(__name__)

SUMMARY_VARIANTS = ('first_order', 'value_aggregation', 'learned', 'mean')


@dataclass
class SummaryConfig:
    """
    Red de resumen del grafo ego-céntrico

    Atributos:
        - variant: first_order | value_aggregation | learned | mean
        - order: orden L del subgrafo
        - weights: lambda_l por orden (solo value_aggregation)
        - aggregation_hidden: capas ocultas del MLP aprendido (por defecto D, D)
        - neighbor_cap: vecinos muestreados por nodo y salto
    """
    variant: str = 'first_order'
    order: int = 1
    weights: tuple = (1.0,)
    aggregation_hidden: tuple = ()
    neighbor_cap: int = 512

    def __post_init__(self):
        if self.variant not in SUMMARY_VARIANTS:
            raise ValidationError(f"Variante de resumen desconocida: {self.variant}")
        if self.variant == 'first_order':
            self.order = 1
        if self.order < 1:
            raise ValidationError("El orden L del resumen debe ser >= 1")
        if any(w < 0 for w in self.weights):
            raise ValidationError("Los pesos lambda_l deben ser no negativos")
        if self.neighbor_cap < 1:
            raise ValidationError("neighbor_cap debe ser >= 1")
        weights = list(self.weights)[:self.order]
        self.weights = tuple(weights + [0.0] * (self.order - len(weights)))
        self.aggregation_hidden = tuple(self.aggregation_hidden)


@dataclass
class FairTrainConfig:
    """Hiperparámetros del juego minimax"""
    balance: float = 0.1
    epochs: int = 20
    batch_size: int = 1024
    filter_lr: float = 0.005
    discriminator_lr: float = 0.005
    discriminator_steps: int = 3
    discriminator_warmup: int = 100
    warmup_users: int = 4096
    filter_hidden: tuple = (128, 64)
    discriminator_hidden: tuple = (16, 8)
    slope: float = DEFAULT_SLOPE
    seed: int = 2021
    use_discriminators: bool = True

    def __post_init__(self):
        if self.balance < 0:
            raise ValidationError("El parámetro de balance lambda debe ser >= 0")
        if self.discriminator_steps < 1:
            raise ValidationError("discriminator_steps debe ser >= 1")
        if self.discriminator_warmup < 0 or self.warmup_users < 1:
            raise ValidationError("discriminator_warmup debe ser >= 0 y warmup_users >= 1")


class FilterBank:
    """
    K sub-filtros D -> D compuestos por media aritmética

    Cada sub-filtro es residual, F^k(e) = e + g_k(e), y su última capa nace
    en cero: un banco recién creado es la identidad.
    """

    def __init__(self, filters):
        if not filters:
            raise ShapeMismatchError("El banco necesita al menos un sub-filtro")
        dim = filters[0].input_dim
        for f in filters:
            if f.input_dim != dim or f.output_dim != dim:
                raise ShapeMismatchError("Cada sub-filtro debe mapear D -> D con la misma D")
        self.filters = filters

    @classmethod
    def create(cls, dim, count, hidden, rng, slope=DEFAULT_SLOPE):
        filters = [build_mlp([dim, *hidden, dim], rng, slope) for _ in range(count)]
        for f in filters:
            f.weights[-1][...] = 0.0
        return cls(filters)

    @property
    def dim(self):
        return self.filters[0].input_dim

    def parameters(self):
        return [t for f in self.filters for t in f.tensors()]

    def forward(self, embeddings):
        embeddings = np.asarray(embeddings, dtype=np.float64)
        outputs, caches = [], []
        for f in self.filters:
            out, cache = mlp_forward(f, embeddings)
            outputs.append(out)
            caches.append(cache)
        return embeddings + np.mean(np.stack(outputs), axis=0), caches

    def backward(self, caches, grad_filtered):
        share = grad_filtered / len(self.filters)
        grads = []
        for f, cache in zip(self.filters, caches):
            g, _ = mlp_backward(f, cache, share)
            grads.extend(g)
        return grads


@dataclass
class FeatureScaler:
    """Estandarización fija (x - center) / spread a la entrada de los discriminadores"""
    center: np.ndarray
    spread: np.ndarray

    @classmethod
    def fit(cls, features):
        features = np.asarray(features, dtype=np.float64)
        spread = features.std(axis=0)
        spread[spread < 1e-12] = 1.0
        return cls(features.mean(axis=0), spread)

    def apply(self, features):
        return (features - self.center) / self.spread


class DiscriminatorBank:
    """
    K clasificadores; el k-ésimo produce C_k logits

    Cada tipo de entrada ('node' para f_u, 'graph0', 'graph1', ... para los
    resúmenes) tiene su propio FeatureScaler; sin escalador la entrada pasa
    sin cambios.
    """

    def __init__(self, discriminators, scalers=None):
        self.discriminators = discriminators
        self.scalers = dict(scalers or {})

    @classmethod
    def create(cls, dim, cardinalities, hidden, rng, slope=DEFAULT_SLOPE):
        return cls([build_mlp([dim, *hidden, c], rng, slope) for c in cardinalities])

    @property
    def cardinalities(self):
        return [d.output_dim for d in self.discriminators]

    def parameters(self):
        return [t for d in self.discriminators for t in d.tensors()]

    def rescale(self, slot, features):
        """Ajustar el escalador de `slot` a las filas dadas (sin filas no cambia)"""
        if len(features):
            self.scalers[slot] = FeatureScaler.fit(features)

    def _inputs(self, slot, features):
        scaler = self.scalers.get(slot)
        return (scaler.apply(features), scaler.spread) if scaler is not None else (features, None)

    def probabilities(self, k, features, slot='node'):
        """Probabilidades softmax del discriminador k"""
        inputs, _ = self._inputs(slot, np.asarray(features, dtype=np.float64))
        logits, _ = mlp_forward(self.discriminators[k], inputs)
        return softmax(logits)

    def cross_entropy(self, features, labels, scale=1.0, grads=None, slot='node'):
        """
        Entropía cruzada escalada sumada sobre atributos y usuarios etiquetados

        Las etiquetas faltantes (-1) no aportan términos.

        Args:
            features (np.ndarray): (n, D)
            labels (np.ndarray): (n, K)
            scale (float): Factor aplicado a pérdida y gradientes
            grads (list|None): Acumulador de gradientes de parámetros
            slot (str): Escalador de entrada a usar

        Returns:
            tuple: (pérdida, gradientes de parámetros, dL/d features)
        """
        if grads is None:
            grads = [np.zeros_like(p) for p in self.parameters()]
        inputs, spread = self._inputs(slot, features)
        d_features = np.zeros_like(inputs)
        total, offset = 0.0, 0
        for k, disc in enumerate(self.discriminators):
            width = 2 * len(disc.weights)
            mask = labels[:, k] != MISSING
            if np.any(mask):
                logits, cache = mlp_forward(disc, inputs[mask])
                loss, d_logits = softmax_cross_entropy(logits, labels[mask, k])
                layer_grads, d_input = mlp_backward(disc, cache, scale * d_logits)
                for i, g in enumerate(layer_grads):
                    grads[offset + i] += g
                d_features[mask] += d_input
                total += scale * loss
            offset += width
        if spread is not None:
            d_features = d_features / spread
        return total, grads, d_features

    def fit_fixed(self, features, labels, epochs=2000, learning_rate=0.005):
        """
        Entrenar solo los discriminadores sobre vectores filtrados fijos

        Returns:
            list: Pérdida media por época
        """
        features = np.asarray(features, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64).reshape(len(features), -1)
        rows = np.any(labels != MISSING, axis=1)
        labeled = int(np.sum(rows))
        if labeled == 0:
            raise NoLabeledUsersError("No hay usuarios etiquetados para los discriminadores")
        self.rescale('node', features[rows])
        optimizer = AdamState.for_params(self.parameters(), learning_rate)
        history = []
        for _ in range(epochs):
            loss, grads, _ = self.cross_entropy(features, labels, 1.0 / labeled)
            adam_step(optimizer, self.parameters(), grads)
            history.append(loss)
        return history


def train_discriminators_fixed(bank, features, labels, epochs=2000, learning_rate=0.005):
    """Fase de discriminador aislada con filtros congelados"""
    return bank.fit_fixed(features, labels, epochs, learning_rate)


def apply_filters(bank, embedding):
    """f = (1/K) sum_k F^k(e)"""
    filtered, _ = bank.forward(embedding)
    return filtered


def predict_filtered(f_u, f_v):
    """Producto interno f_u^T f_v"""
    f_u, f_v = np.asarray(f_u, dtype=np.float64), np.asarray(f_v, dtype=np.float64)
    if f_u.shape != f_v.shape:
        raise ShapeMismatchError(f"Dimensiones distintas: {f_u.shape} y {f_v.shape}")
    return float(f_u @ f_v)


def rating_value(users, items, ratings, filtered):
    """
    V_R = -sum (r_uv - f_u^T f_v)^2 sobre el lote

    Args:
        users, items, ratings (np.ndarray): Tripletas del lote
        filtered (EmbeddingMatrix): Embeddings filtrados

    Returns:
        float: Valor <= 0
    """
    predictions = predict_pairs(filtered, np.asarray(users), np.asarray(items))
    return float(-np.sum((np.asarray(ratings, dtype=np.float64) - predictions) ** 2))


def _require_labels(labels):
    labels = np.asarray(labels, dtype=np.int64)
    if np.any(labels == MISSING):
        raise MissingAttributeError("El usuario no tiene etiqueta para todos los atributos")
    return labels


def node_value(discriminators, f_u, x_u, slot='node'):
    """
    V_N = sum_k ln D^k(f_u)[x_uk]

    Args:
        discriminators (DiscriminatorBank): Discriminadores
        f_u (np.ndarray): Embedding filtrado (D,) o lote (n, D)
        x_u (np.ndarray): Etiquetas (K,) o (n, K)
        slot (str): Escalador de entrada de los discriminadores

    Returns:
        float: Log-verosimilitud <= 0
    """
    features = np.atleast_2d(np.asarray(f_u, dtype=np.float64))
    labels = _require_labels(x_u).reshape(len(features), -1)
    loss, _, _ = discriminators.cross_entropy(features, labels, slot=slot)
    return -loss


def graph_value(discriminators, summary, x_u, config):
    """
    V_S del resumen ego-céntrico

    Args:
        discriminators (DiscriminatorBank): Discriminadores
        summary (np.ndarray|list): p_u, o [h^1_u, ..., h^L_u] para value_aggregation
        x_u (np.ndarray): Etiquetas (K,) o (n, K)
        config (SummaryConfig): Variante y pesos lambda_l

    Returns:
        float: Valor <= 0
    """
    if config.variant == 'value_aggregation':
        total = 0.0
        for slot, (weight, h) in enumerate(zip(config.weights, summary)):
            if weight:
                total += weight * node_value(discriminators, h, x_u, f"graph{slot}")
        return total
    return node_value(discriminators, summary, x_u, 'graph0')


def summarize_first_order(adjacency, filtered, u):
    """
    p_u = sum_v r_uv f_v / sum_v r_uv

    Un usuario sin calificaciones de entrenamiento recibe el vector cero y
    queda excluido de V_S.

    Args:
        adjacency (BipartiteAdjacency): Grafo de entrenamiento
        filtered (np.ndarray): Embeddings filtrados de todos los nodos
        u (int): Usuario

    Returns:
        np.ndarray: Resumen p_u
    """
    if not 0 <= u < adjacency.user_count:
        raise NodeOutOfRangeError(f"{u} no es un nodo de usuario")
    neighbors, weights = adjacency.neighbors(u)
    if weights.sum() <= 0:
        return np.zeros(filtered.shape[1])
    return weights @ filtered[neighbors] / weights.sum()


def propagate_orders(adjacency, filtered, order):
    """
    h^1 = P F, h^l = P h^{l-1} con P normalizada por filas

    Args:
        adjacency (BipartiteAdjacency): Grafo de entrenamiento
        filtered (np.ndarray): (M+N, D)
        order (int): L

    Returns:
        tuple: ([h^1, ..., h^L] para todos los nodos, media (1/L) sum_l h^l)
    """
    if order < 1:
        raise ValidationError("El orden L debe ser >= 1")
    hidden, current = [], np.asarray(filtered, dtype=np.float64)
    propagation = normalized_adjacency(adjacency)
    for _ in range(order):
        current = propagation @ current
        hidden.append(current)
    return hidden, np.mean(np.stack(hidden), axis=0)


def build_aggregation_mlp(dim, order, hidden, rng, slope=DEFAULT_SLOPE):
    """MLP L*D -> D; por defecto dos capas no lineales y una lineal"""
    hidden = tuple(hidden) if hidden else (dim, dim)
    return build_mlp([order * dim, *hidden, dim], rng, slope)


def learned_aggregation(mlp, hidden):
    """
    p_u = MLP(concat(h^1, ..., h^L))

    Args:
        mlp (MlpParams): Red de agregación
        hidden (list): Representaciones h^l (D,) o (n, D), h^1 primero

    Returns:
        np.ndarray: Resumen de dimensión D
    """
    stacked = np.concatenate([np.asarray(h, dtype=np.float64) for h in hidden], axis=-1)
    if stacked.shape[-1] != mlp.input_dim:
        raise ShapeMismatchError(f"El MLP espera {mlp.input_dim} entradas, recibió {stacked.shape[-1]}")
    output, _ = mlp_forward(mlp, stacked)
    return output


class FairGoModel(BaseModel):
    """Filtros, discriminadores y MLP de agregación entrenados"""

    def __init__(self, filters, discriminators, summary, aggregation=None, attribute_names=()):
        self.filters = filters
        self.discriminators = discriminators
        self.summary = summary
        self.aggregation = aggregation
        self.attribute_names = tuple(attribute_names)
        if summary.variant == 'learned' and aggregation is None:
            raise ValidationError("La variante learned requiere un MLP de agregación")

    @classmethod
    def create(cls, dim, cardinalities, summary, config, attribute_names=()):
        rng = np.random.default_rng(config.seed)
        filters = FilterBank.create(dim, len(cardinalities), config.filter_hidden, rng, config.slope)
        discriminators = DiscriminatorBank.create(dim, cardinalities, config.discriminator_hidden, rng, config.slope)
        aggregation = None
        if summary.variant == 'learned':
            aggregation = build_aggregation_mlp(dim, summary.order, summary.aggregation_hidden, rng, config.slope)
        return cls(filters, discriminators, summary, aggregation, attribute_names)

    def get_model_name(self):
        return 'fairgo'

    def filter_parameters(self):
        """Parámetros de la fase de filtros (incluye el MLP de agregación)"""
        params = self.filters.parameters()
        if self.aggregation is not None:
            params = params + self.aggregation.tensors()
        return params

    def discriminator_parameters(self):
        return self.discriminators.parameters()

    def named_arrays(self):
        arrays = {}
        for k, f in enumerate(self.filters.filters):
            arrays.update(mlp_arrays(f"filter{k}", f))
        for k, d in enumerate(self.discriminators.discriminators):
            arrays.update(mlp_arrays(f"disc{k}", d))
        if self.aggregation is not None:
            arrays.update(mlp_arrays('aggregation', self.aggregation))
        for slot, scaler in self.discriminators.scalers.items():
            arrays[f"scaler.{slot}.center"] = scaler.center
            arrays[f"scaler.{slot}.spread"] = scaler.spread
        return arrays

    def restore_arrays(self, arrays):
        for k, f in enumerate(self.filters.filters):
            restore_mlp(f"filter{k}", f, arrays)
        for k, d in enumerate(self.discriminators.discriminators):
            restore_mlp(f"disc{k}", d, arrays)
        if self.aggregation is not None:
            restore_mlp('aggregation', self.aggregation, arrays)
        slots = [key[len('scaler.'):-len('.center')] for key in arrays
                 if key.startswith('scaler.') and key.endswith('.center')]
        self.discriminators.scalers = {
            slot: FeatureScaler(np.array(arrays[f"scaler.{slot}.center"]), np.array(arrays[f"scaler.{slot}.spread"]))
            for slot in slots
        }

    def architecture(self):
        """Metadatos para reconstruir la arquitectura desde un checkpoint"""
        return {
            'filters': [f.layer_sizes for f in self.filters.filters],
            'discriminators': [d.layer_sizes for d in self.discriminators.discriminators],
            'aggregation': self.aggregation.layer_sizes if self.aggregation is not None else None,
            'slope': self.filters.filters[0].slope,
            'attributes': list(self.attribute_names),
            'summary': {
                'variant': self.summary.variant,
                'order': self.summary.order,
                'weights': list(self.summary.weights),
                'aggregation_hidden': list(self.summary.aggregation_hidden),
                'neighbor_cap': self.summary.neighbor_cap
            }
        }

    def save(self, path, seed=None, hash_value=None, extra=None):
        return super().save(path, seed, hash_value, {**self.architecture(), **(extra or {})})

    @classmethod
    def from_checkpoint(cls, path):
        """Reconstruir un modelo guardado con save()"""
        arrays, meta = load_checkpoint(path, 'fairgo')
        arch = meta['extra']
        rng = np.random.default_rng(0)
        filters = FilterBank([build_mlp(sizes, rng, arch['slope']) for sizes in arch['filters']])
        discriminators = DiscriminatorBank([build_mlp(sizes, rng, arch['slope']) for sizes in arch['discriminators']])
        aggregation = build_mlp(arch['aggregation'], rng, arch['slope']) if arch['aggregation'] else None
        model = cls(filters, discriminators, SummaryConfig(**arch['summary']), aggregation, arch['attributes'])
        model.restore_arrays(arrays)
        return model

    def filter_embeddings(self, embeddings):
        """Embeddings filtrados F para todos los nodos"""
        filtered, _ = self.filters.forward(embeddings.values)
        return EmbeddingMatrix(filtered, embeddings.user_count)


@dataclass
class BatchContext:
    """Usuarios ego etiquetados de un lote y sus bloques de propagación"""
    ego_users: np.ndarray
    labels: np.ndarray
    has_graph: np.ndarray
    layers: list = field(default_factory=list)

    def graph_nodes(self):
        cols = [layer.cols for layer in self.layers]
        return np.concatenate([self.ego_users] + cols) if cols else self.ego_users


class FairGoTrainer:
    """
    Bucle minimax alternado sobre embeddings base congelados

    Al inicio de cada época los discriminadores se reentrenan
    (`discriminator_warmup` pasos) sobre los vectores filtrados de una
    muestra de usuarios etiquetados. Por mini-lote se reajustan los
    escaladores de entrada, se dan `discriminator_steps` pasos de
    discriminador y luego un paso de filtros. Los términos V_N y V_S se
    calculan una vez por usuario distinto del lote y se promedian sobre esos
    usuarios; V_R es el error cuadrático medio del lote.
    """

    def __init__(self, embeddings, adjacency, attributes, summary, config, model=None):
        self.embeddings = embeddings
        self.adjacency = adjacency
        self.attributes = attributes
        self.summary = summary
        self.config = config
        self.model = model or FairGoModel.create(
            embeddings.dimension, attributes.cardinalities, summary, config, attributes.names
        )
        self.sampler = np.random.default_rng(config.seed + 7)
        self.shuffle = np.random.default_rng(config.seed + 3)
        self.warmup_rng = np.random.default_rng(config.seed + 11)
        self.filter_optimizer = AdamState.for_params(self.model.filter_parameters(), config.filter_lr)
        self.discriminator_optimizer = AdamState.for_params(
            self.model.discriminator_parameters(), config.discriminator_lr
        )

    @property
    def adversarial(self):
        return self.config.use_discriminators

    def context(self, users, rng=None):
        """Usuarios ego del lote con sus bloques ego-céntricos muestreados"""
        distinct = np.unique(users)
        labels = self.attributes.values[distinct]
        keep = np.any(labels != MISSING, axis=1)
        ego_users, labels = distinct[keep], labels[keep]
        has_graph = self.adjacency.degrees[ego_users] > 0
        layers = []
        if self.adversarial and len(ego_users):
            layers = sample_ego_layers(
                self.adjacency, ego_users, self.summary.order, self.summary.neighbor_cap, rng or self.sampler
            )
        return BatchContext(ego_users, labels, has_graph, layers)

    def _propagate(self, ctx, filtered, nodes):
        """h^l de los usuarios ego para l = 1..L a partir de los bloques"""
        depth = len(ctx.layers)
        tables = [dict() for _ in range(depth)]
        for k in reversed(range(depth)):
            block = ctx.layers[k].matrix
            tables[k][1] = block @ filtered[np.searchsorted(nodes, ctx.layers[k].cols)]
            for order in range(2, depth - k + 1):
                tables[k][order] = block @ tables[k + 1][order - 1]
        return [tables[0][order] for order in range(1, depth + 1)]

    def _propagate_backward(self, ctx, grad_hidden, nodes, grad_filtered):
        depth = len(ctx.layers)
        pending = [dict() for _ in range(depth)]
        pending[0] = {order + 1: g for order, g in enumerate(grad_hidden)}
        for k in range(depth):
            block = ctx.layers[k].matrix
            for order, g in pending[k].items():
                back = block.T @ g
                if order == 1:
                    grad_filtered[np.searchsorted(nodes, ctx.layers[k].cols)] += back
                else:
                    pending[k + 1][order - 1] = pending[k + 1].get(order - 1, 0.0) + back

    def _summary_features(self, hidden):
        """Vectores evaluados por los discriminadores en V_S y su peso"""
        variant = self.summary.variant
        if variant == 'value_aggregation':
            return [(h, w) for h, w in zip(hidden, self.summary.weights)], None
        if variant == 'learned':
            p, cache = mlp_forward(self.model.aggregation, np.concatenate(hidden, axis=1))
            return [(p, 1.0)], cache
        if variant == 'mean':
            return [(np.mean(np.stack(hidden), axis=0), 1.0)], None
        return [(hidden[0], 1.0)], None

    def _summary_backward(self, grad_features, hidden, cache):
        """dL/dh^l y gradientes del MLP de agregación"""
        variant = self.summary.variant
        if variant == 'value_aggregation':
            return grad_features, []
        if variant == 'learned':
            grads, d_input = mlp_backward(self.model.aggregation, cache, grad_features[0])
            dim = hidden[0].shape[1]
            return [d_input[:, l * dim:(l + 1) * dim] for l in range(len(hidden))], grads
        if variant == 'mean':
            return [grad_features[0] / len(hidden)] * len(hidden), []
        return [grad_features[0]], []

    def _adversary_inputs(self, ctx):
        """f_u de los usuarios ego y vectores de resumen con los filtros actuales"""
        nodes = np.unique(ctx.graph_nodes())
        filtered, _ = self.model.filters.forward(self.embeddings.values[nodes])
        hidden = self._propagate(ctx, filtered, nodes)
        features, _ = self._summary_features(hidden)
        return filtered[np.searchsorted(nodes, ctx.ego_users)], features

    def _adversary(self, ctx, f_users, features):
        """Entropías cruzadas promedio de V_N y V_S con sus gradientes"""
        n = len(ctx.ego_users)
        bank = self.model.discriminators
        ce_node, grads, d_users = bank.cross_entropy(f_users, ctx.labels, 1.0 / n, slot='node')
        ce_graph, d_summary = 0.0, []
        for slot, (vectors, weight) in enumerate(features):
            d = np.zeros_like(vectors)
            if weight and np.any(ctx.has_graph):
                ce, grads, d_sub = bank.cross_entropy(
                    vectors[ctx.has_graph], ctx.labels[ctx.has_graph], weight / n, grads, f"graph{slot}"
                )
                ce_graph += ce
                d[ctx.has_graph] = d_sub
            d_summary.append(d)
        return ce_node, ce_graph, grads, d_users, d_summary

    def refresh_scalers(self, ctx, inputs=None):
        """Reajustar los escaladores de entrada de los discriminadores a los vectores actuales"""
        f_users, features = inputs if inputs is not None else self._adversary_inputs(ctx)
        bank = self.model.discriminators
        bank.rescale('node', f_users)
        for slot, (vectors, _) in enumerate(features):
            bank.rescale(f"graph{slot}", vectors[ctx.has_graph])
        return f_users, features

    def warm_up_discriminators(self):
        """
        Reentrenar los discriminadores con los filtros congelados

        Usa hasta `warmup_users` usuarios etiquetados elegidos al azar.

        Returns:
            float: Entropía cruzada tras el último paso
        """
        labeled = np.flatnonzero(self.attributes.labeled_mask())
        if len(labeled) > self.config.warmup_users:
            labeled = np.sort(self.warmup_rng.choice(labeled, size=self.config.warmup_users, replace=False))
        ctx = self.context(labeled, self.warmup_rng)
        f_users, features = self.refresh_scalers(ctx)
        loss = float('nan')
        for _ in range(self.config.discriminator_warmup):
            ce_node, ce_graph, grads, _, _ = self._adversary(ctx, f_users, features)
            loss = ce_node + ce_graph
            adam_step(self.discriminator_optimizer, self.model.discriminator_parameters(), grads)
        return loss

    def discriminator_objective(self, ctx):
        """
        Pérdida de la fase de discriminadores: -(V_N + V_S) promedio

        Returns:
            tuple: (pérdida, gradientes de discriminadores, estadísticas)
        """
        f_users, features = self._adversary_inputs(ctx)
        ce_node, ce_graph, grads, _, _ = self._adversary(ctx, f_users, features)
        return ce_node + ce_graph, grads, {'v_n': -ce_node, 'v_s': -ce_graph}

    def filter_objective(self, users, items, ratings, ctx=None):
        """
        Pérdida de la fase de filtros: MSE - lambda * CE(V_N + V_S)

        Con lambda = 0 o sin discriminadores el término adversarial no se
        evalúa y la fase se reduce al error de calificación.

        Returns:
            tuple: (pérdida, gradientes de filtros y agregación, estadísticas)
        """
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        ratings = np.asarray(ratings, dtype=np.float64)
        if ctx is None:
            ctx = self.context(users)
        use_adversary = self.adversarial and self.config.balance > 0 and len(ctx.ego_users) > 0
        item_nodes = self.embeddings.user_count + items
        parts = [users, item_nodes] + ([ctx.graph_nodes()] if use_adversary else [])
        nodes = np.unique(np.concatenate(parts))

        filtered, caches = self.model.filters.forward(self.embeddings.values[nodes])
        pu, pv = np.searchsorted(nodes, users), np.searchsorted(nodes, item_nodes)
        f_u, f_v = filtered[pu], filtered[pv]
        error = np.einsum('ij,ij->i', f_u, f_v) - ratings
        mse = float(np.mean(error ** 2))
        grad_filtered = np.zeros_like(filtered)
        scale = (2.0 * error / len(ratings))[:, None]
        np.add.at(grad_filtered, pu, scale * f_v)
        np.add.at(grad_filtered, pv, scale * f_u)

        stats = {'v_r': -mse}
        loss = mse
        aggregation_grads = [np.zeros_like(p) for p in self.model.aggregation.tensors()] \
            if self.model.aggregation is not None else []
        if use_adversary:
            balance = self.config.balance
            hidden = self._propagate(ctx, filtered, nodes)
            features, cache = self._summary_features(hidden)
            pe = np.searchsorted(nodes, ctx.ego_users)
            ce_node, ce_graph, _, d_users, d_summary = self._adversary(ctx, filtered[pe], features)
            loss = mse - balance * (ce_node + ce_graph)
            grad_filtered[pe] -= balance * d_users
            grad_hidden, agg = self._summary_backward([-balance * d for d in d_summary], hidden, cache)
            if agg:
                aggregation_grads = agg
            self._propagate_backward(ctx, grad_hidden, nodes, grad_filtered)
            stats.update({'v_n': -ce_node, 'v_s': -ce_graph})

        grads = self.model.filters.backward(caches, grad_filtered) + aggregation_grads
        return loss, grads, stats

    def _check(self, value, phase, epoch):
        if not np.isfinite(value):
            raise DivergenceDetectedError(f"Pérdida no finita en la fase de {phase}, época {epoch}")

    def validation_rmse(self, users, items, ratings):
        filtered = self.model.filter_embeddings(self.embeddings)
        return rmse(predict_pairs(filtered, users, items), ratings)

    def train(self, store):
        """
        Entrenar filtros y discriminadores

        Args:
            store (RatingStore): Calificaciones particionadas

        Returns:
            list: Curva [{'epoch', 'v_r', 'v_n', 'v_s', 'validation_rmse'}]
        """
        users, items, ratings = store.triples('train')
        if len(ratings) == 0:
            raise EmptyTrainingSetError("No hay tripletas de entrenamiento")
        if self.adversarial and not np.any(self.attributes.labeled_mask()):
            raise NoLabeledUsersError("Ningún usuario tiene atributos sensibles etiquetados")
        val_users, val_items, val_ratings = store.triples('validation')

        curve = []
        for epoch in range(1, self.config.epochs + 1):
            if self.adversarial and self.config.discriminator_warmup:
                warmup = self.warm_up_discriminators()
                self._check(warmup, 'discriminadores', epoch)
                logger.debug(f"FairGo época {epoch}: entropía cruzada tras el calentamiento {warmup:.4f}")
            order = self.shuffle.permutation(len(ratings))
            totals = {'v_r': [], 'v_n': [], 'v_s': []}
            for start in range(0, len(order), self.config.batch_size):
                batch = order[start:start + self.config.batch_size]
                bu, bv, br = users[batch], items[batch], ratings[batch]
                ctx = self.context(bu)
                if self.adversarial and len(ctx.ego_users):
                    self.refresh_scalers(ctx)
                    for _ in range(self.config.discriminator_steps):
                        loss_d, grads_d, stats_d = self.discriminator_objective(ctx)
                        self._check(loss_d, 'discriminadores', epoch)
                        adam_step(self.discriminator_optimizer, self.model.discriminator_parameters(), grads_d)
                    totals['v_n'].append(stats_d['v_n'])
                    totals['v_s'].append(stats_d['v_s'])
                loss_f, grads_f, stats_f = self.filter_objective(bu, bv, br, ctx)
                self._check(loss_f, 'filtros', epoch)
                adam_step(self.filter_optimizer, self.model.filter_parameters(), grads_f)
                totals['v_r'].append(stats_f['v_r'])

            entry = {'epoch': epoch}
            for key, values in totals.items():
                entry[key] = float(np.mean(values)) if values else float('nan')
            entry['validation_rmse'] = (self.validation_rmse(val_users, val_items, val_ratings)
                                        if len(val_ratings) else float('nan'))
            curve.append(entry)
            logger.info(
                f"FairGo época {epoch}: V_R {entry['v_r']:.4f}, V_N {entry['v_n']:.4f}, "
                f"V_S {entry['v_s']:.4f}, RMSE validación {entry['validation_rmse']:.4f}"
            )
        return curve


def train_adversarial(embeddings, adjacency, attributes, summary, config, store):
    """
    Entrenar FairGo sobre embeddings base congelados

    Args:
        embeddings (EmbeddingMatrix): Embeddings originales E
        adjacency (BipartiteAdjacency): Grafo de entrenamiento
        attributes (AttributeTable): Atributos sensibles a filtrar
        summary (SummaryConfig): Red de resumen
        config (FairTrainConfig): Hiperparámetros
        store (RatingStore): Calificaciones particionadas

    Returns:
        tuple: (FairGoModel, curva de entrenamiento)
    """
    trainer = FairGoTrainer(embeddings, adjacency, attributes, summary, config)
    curve = trainer.train(store)
    return trainer.model, curve
