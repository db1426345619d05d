"""
Tests unitarios para las métricas de precisión y equidad de grupo
"""
import unittest
import sys
import os

import numpy as np

# Agregar el directorio padre al path para importar módulos
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.metrics import auc, equal_opportunity, group_statistics, micro_f1, rmse, statistical_parity
from models.rating_store import MISSING
from utils.exceptions import EmptyInputError, NoScoredItemsError, SingleClassError


class TestRmse(unittest.TestCase):
    """Tests para el RMSE"""

    def test_exact_predictions(self):
        self.assertEqual(rmse([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]), 0.0)

    def test_symmetric_errors(self):
        self.assertAlmostEqual(rmse([3.0, 1.0], [1.0, 3.0]), 2.0)

    def test_single_pair(self):
        self.assertAlmostEqual(rmse([2.5], [4.0]), 1.5)

    def test_permutation_invariance(self):
        predictions = np.array([1.0, 4.0, 2.5, 3.0])
        truths = np.array([2.0, 4.5, 2.0, 1.0])
        order = np.array([2, 0, 3, 1])
        self.assertAlmostEqual(rmse(predictions, truths), rmse(predictions[order], truths[order]))

    def test_empty_input(self):
        with self.assertRaises(EmptyInputError):
            rmse([], [])
        with self.assertRaises(EmptyInputError):
            rmse([1.0], [1.0, 2.0])


class TestAuc(unittest.TestCase):
    """Tests para el AUC por rangos"""

    def test_perfect_ranking(self):
        self.assertEqual(auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]), 1.0)

    def test_ties_get_half_credit(self):
        self.assertEqual(auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]), 0.5)

    def test_inverted_ranking(self):
        self.assertEqual(auc([0.1, 0.2, 0.8, 0.9], [1, 1, 0, 0]), 0.0)

    def test_negated_scores_complement(self):
        scores = np.random.default_rng(0).standard_normal(30)
        labels = np.arange(30) % 2
        self.assertAlmostEqual(auc(scores, labels) + auc(-scores, labels), 1.0)

    def test_single_class(self):
        with self.assertRaises(SingleClassError):
            auc([0.2, 0.4], [1, 1])


class TestMicroF1(unittest.TestCase):
    """Tests para el F1 micro-promediado"""

    def test_all_correct_and_all_wrong(self):
        self.assertEqual(micro_f1([0, 1, 2], [0, 1, 2]), 1.0)
        self.assertEqual(micro_f1([1, 2, 0], [0, 1, 2]), 0.0)

    def test_equals_accuracy(self):
        rng = np.random.default_rng(3)
        predicted = rng.integers(0, 4, size=50)
        truth = rng.integers(0, 4, size=50)
        self.assertAlmostEqual(micro_f1(predicted, truth), float(np.mean(predicted == truth)))

    def test_empty_input(self):
        with self.assertRaises(EmptyInputError):
            micro_f1([], [])


class TestStatisticalParity(unittest.TestCase):
    """Tests para la paridad estadística"""

    def test_one_item_binary(self):
        """Un ítem con media masculina 4.0 y femenina 3.0 da 1.0"""
        groups = np.array([0, 0, 1, 1])
        value = statistical_parity([0, 1, 2, 3], [0, 0, 0, 0], [4.5, 3.5, 3.0, 3.0], groups, 2)
        self.assertAlmostEqual(value, 1.0)

    def test_identical_predictions(self):
        groups = np.array([0, 1, 0, 1])
        value = statistical_parity([0, 1, 2, 3], [0, 0, 1, 1], [3.0, 3.0, 2.0, 2.0], groups, 2)
        self.assertEqual(value, 0.0)

    def test_single_group_multi_valued(self):
        """Con un solo grupo presente la desviación estándar es cero"""
        groups = np.array([2, 2])
        self.assertEqual(statistical_parity([0, 1], [0, 0], [1.0, 5.0], groups, 3), 0.0)

    def test_single_group_binary(self):
        groups = np.array([1, 1])
        with self.assertRaises(NoScoredItemsError):
            statistical_parity([0, 1], [0, 0], [1.0, 5.0], groups, 2)

    def test_multi_valued_standard_deviation(self):
        groups = np.array([0, 1, 2])
        value = statistical_parity([0, 1, 2], [0, 0, 0], [1.0, 2.0, 3.0], groups, 3)
        self.assertAlmostEqual(value, np.std([1.0, 2.0, 3.0]))

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(7)
        users = rng.integers(0, 20, size=80)
        items = rng.integers(0, 6, size=80)
        predictions = rng.uniform(1, 5, size=80)
        groups = rng.integers(0, 3, size=20)
        relabeled = (groups + 1) % 3
        self.assertAlmostEqual(
            statistical_parity(users, items, predictions, groups, 3),
            statistical_parity(users, items, predictions, relabeled, 3)
        )

    def test_skipped_items_are_counted(self):
        """El ítem 1 solo tiene calificaciones del grupo 0"""
        groups = np.array([0, 1, MISSING])
        value, skipped = statistical_parity(
            [0, 1, 0, 2], [0, 0, 1, 1], [4.0, 2.0, 3.0, 1.0], groups, 2, return_skipped=True
        )
        self.assertAlmostEqual(value, 2.0)
        self.assertEqual(skipped, 1)

    def test_unlabeled_users_only(self):
        with self.assertRaises(NoScoredItemsError):
            statistical_parity([0], [0], [3.0], np.array([MISSING]), 2)


class TestEqualOpportunity(unittest.TestCase):
    """Tests para la igualdad de oportunidad"""

    def test_one_item_binary(self):
        """MAE por grupo 1.0 y 0.5 da 0.5"""
        groups = np.array([0, 1])
        value = equal_opportunity([0, 1], [0, 0], [4.0, 3.5], [3.0, 3.0], groups, 2)
        self.assertAlmostEqual(value, 0.5)

    def test_identical_error_profiles(self):
        groups = np.array([0, 1, 0, 1])
        value = equal_opportunity([0, 1, 2, 3], [0, 0, 1, 1], [4.0, 2.0, 1.0, 3.0], [3.0, 3.0, 2.0, 2.0], groups, 2)
        self.assertEqual(value, 0.0)

    def test_non_negative(self):
        rng = np.random.default_rng(11)
        users = rng.integers(0, 15, size=60)
        items = rng.integers(0, 5, size=60)
        value = equal_opportunity(users, items, rng.uniform(1, 5, 60), rng.uniform(1, 5, 60),
                                  rng.integers(0, 2, size=15), 2)
        self.assertGreaterEqual(value, 0.0)


class TestGroupStatistics(unittest.TestCase):
    """Tests para la tabla por ítem y grupo"""

    def test_table_layout(self):
        table = group_statistics([0, 1, 2], [5, 5, 7], [2.0, 4.0, 1.0], np.array([0, 1, 1]))
        self.assertEqual(list(table.index), [5, 7])
        self.assertEqual(table.loc[5, 0], 2.0)
        self.assertEqual(table.loc[5, 1], 4.0)
        self.assertTrue(np.isnan(table.loc[7, 0]))


if __name__ == '__main__':
    unittest.main()
