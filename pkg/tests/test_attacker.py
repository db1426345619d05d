"""
Tests unitarios para la auditoría de fuga con el atacante lineal
"""
import unittest
import sys
import os

import numpy as np

# Agregar el directorio padre al path para importar módulos
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.attacker import AttackerConfig, attack_attribute, leakage_audit, leakage_audit_repeated
from models.rating_store import MISSING, AttributeTable
from utils.exceptions import InsufficientLabelsError, ShapeMismatchError


class TestAttackAttribute(unittest.TestCase):
    """Tests para el atacante de un atributo"""

    def setUp(self):
        self.labels = np.arange(200) % 2
        self.config = AttackerConfig(epochs=200)

    def test_identical_features_carry_no_signal(self):
        metric, value = attack_attribute(np.ones((200, 4)), self.labels, 2, seed=0, config=self.config)
        self.assertEqual(metric, 'auc')
        self.assertAlmostEqual(value, 0.5, delta=0.05)

    def test_one_hot_attribute_is_recovered(self):
        features = np.eye(2)[self.labels]
        _, value = attack_attribute(features, self.labels, 2, seed=0, config=self.config)
        self.assertGreaterEqual(value, 0.99)

    def test_multi_class_reports_micro_f1(self):
        labels = np.arange(300) % 3
        metric, value = attack_attribute(np.eye(3)[labels], labels, 3, seed=1)
        self.assertEqual(metric, 'micro_f1')
        self.assertGreaterEqual(value, 0.99)

    def test_missing_labels_are_ignored(self):
        labels = self.labels.copy()
        labels[::5] = MISSING
        features = np.eye(2)[np.where(labels == MISSING, 0, labels)]
        _, value = attack_attribute(features, labels, 2, seed=0, config=self.config)
        self.assertGreaterEqual(value, 0.99)

    def test_deterministic_given_seed(self):
        features = np.random.default_rng(4).standard_normal((200, 3)) + self.labels[:, None] * 0.5
        a = attack_attribute(features, self.labels, 2, seed=7, config=self.config)
        b = attack_attribute(features, self.labels, 2, seed=7, config=self.config)
        self.assertEqual(a, b)

    def test_single_class(self):
        with self.assertRaises(InsufficientLabelsError):
            attack_attribute(np.ones((10, 2)), np.zeros(10, dtype=int), 2, seed=0)

    def test_too_few_users_per_class(self):
        labels = np.array([0, 0, 0, 1, 1, 1])
        with self.assertRaises(InsufficientLabelsError):
            attack_attribute(np.eye(2)[labels], labels, 2, seed=0)


class TestLeakageAudit(unittest.TestCase):
    """Tests para la auditoría de todos los atributos"""

    def setUp(self):
        rng = np.random.default_rng(2)
        gender = np.arange(120) % 2
        age = np.arange(120) % 3
        self.attributes = AttributeTable(('gender', 'age'), (2, 3), np.stack([gender, age], axis=1))
        self.features = np.concatenate([np.eye(2)[gender], np.eye(3)[age]], axis=1) \
            + rng.normal(scale=1.0, size=(120, 5))
        self.config = AttackerConfig(epochs=100)

    def test_metric_per_attribute(self):
        results = leakage_audit(self.features, self.attributes, seed=0, config=self.config)
        self.assertEqual(set(results), {'gender', 'age'})
        self.assertEqual(results['gender'][0], 'auc')
        self.assertEqual(results['age'][0], 'micro_f1')

    def test_repeated_audit_is_seed_mean(self):
        seeds = [0, 1, 2]
        merged = leakage_audit_repeated(self.features, self.attributes, seeds, self.config)
        runs = [leakage_audit(self.features, self.attributes, s, self.config) for s in seeds]
        for name in ('gender', 'age'):
            self.assertAlmostEqual(merged[name][1], np.mean([run[name][1] for run in runs]))

    def test_user_count_mismatch(self):
        with self.assertRaises(ShapeMismatchError):
            leakage_audit(self.features[:10], self.attributes, seed=0)


if __name__ == '__main__':
    unittest.main()
