"""
Corridas de aceptación sobre datos sintéticos y MovieLens-1M

Las corridas sintéticas forman parte de la suite por defecto. Las de
MovieLens-1M llevan la marca slow (pytest -m slow) y requieren
FAIRGO_ML1M_DIR con ratings.dat y users.dat.
"""
import sys
import os

import numpy as np
import pytest

# Agregar el directorio padre al path para importar módulos
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.attacker import leakage_audit_repeated
from models.bipartite_graph import build_adjacency
from models.datasets import carve_validation, generate_synthetic, parse_movielens, split_ratings
from models.fairgo import FairTrainConfig, SummaryConfig, propagate_orders, train_adversarial
from models.metrics import rmse
from models.recommenders import BaseTrainConfig, predict_pairs, train_gcn, train_pmf

ML1M_DIR = os.getenv('FAIRGO_ML1M_DIR')
ATTACKER_SEEDS = [0, 1, 2, 3, 4]


def _synthetic(seed=2021):
    store, attributes = generate_synthetic(500, 300, 0.05, [2], 1.0, seed)
    store = split_ratings(store, [0.7, 0.1, 0.2], seed)
    embeddings = train_pmf(store, BaseTrainConfig(epochs=60, batch_size=256, dim=32, seed=seed))
    return store, attributes, embeddings


def _fair(store, attributes, embeddings, balance, summary=None, seed=2021, use_discriminators=True):
    config = FairTrainConfig(balance=balance, epochs=20, batch_size=256, seed=seed,
                             use_discriminators=use_discriminators)
    model, _ = train_adversarial(embeddings, build_adjacency(store), attributes,
                                 summary or SummaryConfig(), config, store)
    return model.filter_embeddings(embeddings)


def _test_rmse(store, embeddings):
    users, items, ratings = store.triples('test')
    return rmse(predict_pairs(embeddings, users, items), ratings)


def _auc(features, attributes):
    return leakage_audit_repeated(features, attributes, ATTACKER_SEEDS)['planted_0'][1]


@pytest.fixture(scope='module')
def synthetic():
    return _synthetic()


def test_planted_attribute_leaks_from_base(synthetic):
    store, attributes, embeddings = synthetic
    assert _auc(embeddings.users, attributes) >= 0.9


def test_zero_balance_matches_discriminator_free(synthetic):
    store, attributes, embeddings = synthetic
    zero = _fair(store, attributes, embeddings, 0.0)
    free = _fair(store, attributes, embeddings, 0.0, use_discriminators=False)
    assert abs(_test_rmse(store, zero) - _test_rmse(store, free)) <= 0.01


def test_fair_filters_remove_planted_attribute(synthetic):
    store, attributes, embeddings = synthetic
    filtered = _fair(store, attributes, embeddings, 0.1)
    reference = _fair(store, attributes, embeddings, 0.0)
    hidden, _ = propagate_orders(build_adjacency(store), filtered.values, 1)

    assert _auc(filtered.users, attributes) <= 0.60
    assert _auc(hidden[0][:store.user_count], attributes) <= 0.65
    assert _test_rmse(store, filtered) <= 1.15 * _test_rmse(store, reference)


def test_learned_aggregation_not_worse_than_first_order(synthetic):
    store, attributes, embeddings = synthetic
    for seed in (0, 1, 2):
        first = _fair(store, attributes, embeddings, 0.1, SummaryConfig(), seed)
        learned = _fair(store, attributes, embeddings, 0.1, SummaryConfig('learned', 2), seed)
        assert _auc(learned.users, attributes) <= _auc(first.users, attributes) + 0.02


@pytest.fixture(scope='module')
def movielens():
    if not ML1M_DIR:
        pytest.skip('FAIRGO_ML1M_DIR no está definido')
    store, attributes = parse_movielens(os.path.join(ML1M_DIR, 'ratings.dat'), os.path.join(ML1M_DIR, 'users.dat'))
    store = carve_validation(split_ratings(store, [0.9, 0.1], 2021), 0.05, 2021)
    return store, attributes


@pytest.mark.slow
def test_movielens_higher_orders_leak_less(movielens):
    store, attributes = movielens
    embeddings = train_pmf(store, BaseTrainConfig(seed=2021))
    gender = attributes.subset(['gender'])
    hidden, _ = propagate_orders(build_adjacency(store), embeddings.values, 3)
    observed = [leakage_audit_repeated(embeddings.users, gender, ATTACKER_SEEDS)['gender'][1]]
    observed += [leakage_audit_repeated(h[:store.user_count], gender, ATTACKER_SEEDS)['gender'][1] for h in hidden]
    np.testing.assert_allclose(observed, [0.6615, 0.6181, 0.5102, 0.5004], atol=0.03)


@pytest.mark.slow
def test_movielens_headline(movielens):
    store, attributes = movielens
    pmf = train_pmf(store, BaseTrainConfig(seed=2021))
    assert abs(_test_rmse(store, pmf) - 0.8681) <= 0.02

    adjacency = build_adjacency(store)
    gcn = train_gcn(store, adjacency, BaseTrainConfig(seed=2021))
    gender = attributes.subset(['gender'])
    model, _ = train_adversarial(gcn, adjacency, gender, SummaryConfig('value_aggregation', 2, (1.0, 1.0)),
                                 FairTrainConfig(balance=0.1), store)
    filtered = model.filter_embeddings(gcn)
    assert leakage_audit_repeated(filtered.users, gender, ATTACKER_SEEDS)['gender'][1] <= 0.53
    assert _test_rmse(store, filtered) <= 0.93
