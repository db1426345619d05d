"""
Tests unitarios para la ingesta de datos y las particiones
"""
import unittest
import sys
import os
import tempfile

import numpy as np

# Agregar el directorio padre al path para importar módulos
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.settings import SPLIT_TAGS
from models.datasets import (carve_validation, generate_synthetic, log_normalize_plays,
                             parse_lastfm, parse_movielens, split_ratings)
from models.rating_store import MISSING, AttributeTable, RatingStore
from utils.exceptions import (DataFormatError, IndexOutOfRangeError, MissingDataError,
                              MissingFileError, NonPositivePlayCountError, ParamInvalidError,
                              RatioSumInvalidError, UnknownAgeCodeError, ValidationError)


def _write(directory, name, lines):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='latin-1') as f:
        f.write("\n".join(lines) + "\n")
    return path


class TestParseMovielens(unittest.TestCase):
    """Tests para el lector de MovieLens-1M"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.users_path = _write(self.tmp.name, 'users.dat', [
            '1::F::1::10::48067',
            '2::M::56::16::70072'
        ])

    def tearDown(self):
        self.tmp.cleanup()

    def test_parse_valid_files(self):
        """Índices densos y atributos en el orden gender, age, occupation"""
        ratings_path = _write(self.tmp.name, 'ratings.dat', [
            '1::10::5::978300760',
            '1::20::3::978302109',
            '2::10::4::978301968'
        ])
        store, attributes = parse_movielens(ratings_path, self.users_path)

        self.assertEqual(store.user_count, 2)
        self.assertEqual(store.item_count, 2)
        self.assertEqual(len(store), 3)
        np.testing.assert_array_equal(store.users, [0, 0, 1])
        np.testing.assert_array_equal(store.items, [0, 1, 0])
        np.testing.assert_array_equal(store.ratings, [5.0, 3.0, 4.0])
        self.assertEqual(attributes.names, ('gender', 'age', 'occupation'))
        self.assertEqual(attributes.cardinalities, (2, 7, 21))
        np.testing.assert_array_equal(attributes.values, [[0, 0, 10], [1, 6, 16]])

    def test_malformed_line_reports_line_number(self):
        """Una línea con campos faltantes indica su número"""
        ratings_path = _write(self.tmp.name, 'ratings.dat', [
            '1::10::5::978300760',
            '1::20::3'
        ])
        with self.assertRaises(DataFormatError) as ctx:
            parse_movielens(ratings_path, self.users_path)
        self.assertEqual(ctx.exception.line_number, 2)
        self.assertIn('línea 2', str(ctx.exception))

    def test_unknown_age_code(self):
        """Un código de edad fuera del conjunto conocido es rechazado"""
        ratings_path = _write(self.tmp.name, 'ratings.dat', ['1::10::5::978300760'])
        users_path = _write(self.tmp.name, 'bad_users.dat', ['1::F::19::10::48067'])
        with self.assertRaises(UnknownAgeCodeError):
            parse_movielens(ratings_path, users_path)

    def test_duplicate_pair(self):
        """Un par usuario-ítem repetido es un error de formato"""
        ratings_path = _write(self.tmp.name, 'ratings.dat', [
            '1::10::5::978300760',
            '1::10::4::978300761'
        ])
        with self.assertRaises(DataFormatError):
            parse_movielens(ratings_path, self.users_path)

    def test_empty_and_missing_files(self):
        """Archivo vacío y archivo inexistente"""
        empty = _write(self.tmp.name, 'empty.dat', [''])
        with self.assertRaises(MissingDataError):
            parse_movielens(empty, self.users_path)
        with self.assertRaises(MissingFileError):
            parse_movielens(os.path.join(self.tmp.name, 'nope.dat'), self.users_path)

    def test_user_without_profile_has_missing_labels(self):
        """Un usuario sin perfil conserva etiquetas -1"""
        ratings_path = _write(self.tmp.name, 'ratings.dat', [
            '1::10::5::978300760',
            '3::10::2::978300760'
        ])
        store, attributes = parse_movielens(ratings_path, self.users_path)
        self.assertEqual(store.user_count, 3)
        np.testing.assert_array_equal(attributes.values[2], [MISSING, MISSING, MISSING])


class TestParseLastfm(unittest.TestCase):
    """Tests para el lector de Lastfm-360K"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.profile_path = _write(self.tmp.name, 'profile.tsv', [
            'u1\tm\t22\tSpain\tFeb 1, 2007',
            'u2\tf\t40\tChile\tMar 3, 2008',
            'u3\t\t\tPeru\tJan 5, 2006'
        ])

    def tearDown(self):
        self.tmp.cleanup()

    def test_duplicates_are_merged_and_normalized(self):
        """Filas repetidas suman reproducciones; el artista sin mbid usa su nombre"""
        plays_path = _write(self.tmp.name, 'plays.tsv', [
            'u1\tmb-a\tArtist A\t10',
            'u1\tmb-a\tArtist A\t90',
            'u2\t\tArtist B\t1',
            'u3\tmb-a\tArtist A\t5'
        ])
        store, attributes = parse_lastfm(plays_path, self.profile_path)

        self.assertEqual(store.user_count, 3)
        self.assertEqual(store.item_count, 2)
        self.assertEqual(len(store), 3)
        self.assertAlmostEqual(store.ratings.max(), 5.0)
        self.assertAlmostEqual(store.ratings.min(), 1.0)
        self.assertEqual(attributes.names, ('gender', 'age'))
        np.testing.assert_array_equal(attributes.values, [[1, 0], [0, 2], [MISSING, MISSING]])

    def test_non_positive_play_count(self):
        """Conteos menores que 1 se rechazan con número de línea"""
        plays_path = _write(self.tmp.name, 'plays.tsv', [
            'u1\tmb-a\tArtist A\t10',
            'u2\tmb-b\tArtist B\t0'
        ])
        with self.assertRaises(NonPositivePlayCountError) as ctx:
            parse_lastfm(plays_path, self.profile_path)
        self.assertEqual(ctx.exception.line_number, 2)

    def test_row_with_extra_fields_is_a_format_error(self):
        """Una fila con más columnas que el formato se reporta como DataFormatError"""
        plays_path = _write(self.tmp.name, 'plays.tsv', [
            'u1\tmb-a\tArtist A\t10',
            'u2\tmb-b\tArtist B\t3\textra\tcolumns'
        ])
        with self.assertRaises(DataFormatError) as ctx:
            parse_lastfm(plays_path, self.profile_path)
        self.assertEqual(ctx.exception.line_number, 2)

    def test_empty_plays_file(self):
        plays_path = _write(self.tmp.name, 'plays.tsv', [])
        with self.assertRaises(MissingDataError):
            parse_lastfm(plays_path, self.profile_path)


class TestLogNormalize(unittest.TestCase):
    """Tests para la normalización logarítmica de reproducciones"""

    def test_extremes_map_to_rating_range(self):
        ratings = log_normalize_plays(np.array([1, 100, 10]))
        self.assertAlmostEqual(ratings[0], 1.0)
        self.assertAlmostEqual(ratings[1], 5.0)
        self.assertTrue(1.0 < ratings[2] < 5.0)

    def test_equal_counts_map_to_midpoint(self):
        np.testing.assert_allclose(log_normalize_plays(np.array([7, 7, 7])), 3.0)

    def test_zero_count(self):
        with self.assertRaises(NonPositivePlayCountError):
            log_normalize_plays(np.array([0, 5]))


class TestSplits(unittest.TestCase):
    """Tests para las particiones train/validation/test"""

    def setUp(self):
        self.store = RatingStore(
            4, 5,
            [0, 0, 1, 1, 2, 2, 3, 3, 0, 1],
            [0, 1, 2, 3, 4, 0, 1, 2, 3, 4],
            [5, 4, 3, 2, 1, 5, 4, 3, 2, 1],
            np.zeros(10)
        )

    def test_three_way_ratios(self):
        """10 tripletas con 7:1:2 producen exactamente 7, 1 y 2"""
        result = split_ratings(self.store, [0.7, 0.1, 0.2], seed=3)
        self.assertEqual(result.split_counts(), {'train': 7, 'validation': 1, 'test': 2})

    def test_same_seed_same_split(self):
        a = split_ratings(self.store, [0.9, 0.1], seed=11)
        b = split_ratings(self.store, [0.9, 0.1], seed=11)
        np.testing.assert_array_equal(a.splits, b.splits)

    def test_ratios_must_sum_to_one(self):
        with self.assertRaises(RatioSumInvalidError):
            split_ratings(self.store, [0.7, 0.2], seed=0)

    def test_carve_validation_moves_train_only(self):
        """La extracción de validación solo toma tripletas de train"""
        split = split_ratings(self.store, [0.8, 0.2], seed=1)
        carved = carve_validation(split, 0.25, seed=1)
        self.assertEqual(carved.split_counts()['test'], split.split_counts()['test'])
        self.assertEqual(carved.split_counts()['validation'], 2)
        tests_before = split.splits == SPLIT_TAGS['TEST']
        np.testing.assert_array_equal(carved.splits[tests_before], split.splits[tests_before])

    def test_carve_validation_fraction_range(self):
        with self.assertRaises(ValidationError):
            carve_validation(self.store, 1.0, seed=0)


class TestRatingStore(unittest.TestCase):
    """Tests para los tipos RatingStore y AttributeTable"""

    def test_out_of_range_index(self):
        with self.assertRaises(IndexOutOfRangeError):
            RatingStore(2, 2, [0, 2], [0, 1], [3, 4], [0, 0])

    def test_rating_out_of_range(self):
        with self.assertRaises(ValidationError):
            RatingStore(2, 2, [0, 1], [0, 1], [3, 6], [0, 0])

    def test_save_is_byte_stable(self):
        """Guardar dos veces la misma tienda produce archivos idénticos"""
        store = RatingStore(2, 2, [0, 1], [1, 0], [3.5, 4.0], [0, 2])
        with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
            store.save(a)
            store.save(b)
            for name in ('ratings.csv', 'ratings.json'):
                with open(os.path.join(a, name), 'rb') as fa, open(os.path.join(b, name), 'rb') as fb:
                    self.assertEqual(fa.read(), fb.read())
            loaded = RatingStore.load(a)
            np.testing.assert_array_equal(loaded.splits, store.splits)

    def test_attribute_subset(self):
        """El ajuste composicional toma cualquier subconjunto de atributos"""
        table = AttributeTable(('gender', 'age'), (2, 3), [[0, 2], [1, MISSING]])
        subset = table.subset(['age'])
        self.assertEqual(subset.names, ('age',))
        np.testing.assert_array_equal(subset.values[:, 0], [2, MISSING])
        with self.assertRaises(ValidationError):
            table.subset(['occupation'])

    def test_attribute_cardinality_check(self):
        with self.assertRaises(ValidationError):
            AttributeTable(('gender',), (2,), [[0], [2]])


class TestGenerateSynthetic(unittest.TestCase):
    """Tests para el generador con atributos plantados"""

    def test_shape_and_names(self):
        store, attributes = generate_synthetic(50, 40, 0.1, [2, 3], 0.8, seed=5)
        self.assertEqual(len(store), 50 * 4)
        self.assertEqual(attributes.names, ('planted_0', 'planted_1'))
        self.assertEqual(attributes.cardinalities, (2, 3))
        self.assertTrue(np.all((store.ratings >= 1.0) & (store.ratings <= 5.0)))

    def test_same_seed_identical(self):
        a, attrs_a = generate_synthetic(30, 20, 0.2, [2], 1.0, seed=9)
        b, attrs_b = generate_synthetic(30, 20, 0.2, [2], 1.0, seed=9)
        np.testing.assert_array_equal(a.ratings, b.ratings)
        np.testing.assert_array_equal(a.items, b.items)
        np.testing.assert_array_equal(attrs_a.values, attrs_b.values)

    def test_invalid_parameters(self):
        with self.assertRaises(ParamInvalidError):
            generate_synthetic(30, 20, 0.2, [2], 1.5, seed=0)
        with self.assertRaises(ParamInvalidError):
            generate_synthetic(0, 20, 0.2, [2], 0.5, seed=0)
        with self.assertRaises(ParamInvalidError):
            generate_synthetic(30, 20, 0.2, [1], 0.5, seed=0)
        with self.assertRaises(ParamInvalidError):
            generate_synthetic(30, 20, 0.2, [2], 0.5, seed=0, bias=-0.1)
        with self.assertRaises(ParamInvalidError):
            generate_synthetic(30, 20, 0.2, [2], 0.5, seed=0, noise=-1.0)

    def _class_gap(self, strength):
        store, attributes = generate_synthetic(400, 100, 0.5, [2], strength, seed=3)
        means = np.bincount(store.users, weights=store.ratings, minlength=400) / np.bincount(store.users, minlength=400)
        labels = attributes.values[:, 0]
        return means[labels == 1].mean() - means[labels == 0].mean()

    def test_planted_attribute_shifts_ratings(self):
        """Con fuerza 1 la clase desplaza la media del usuario en 2 * bias"""
        self.assertAlmostEqual(self._class_gap(1.0), 0.3, delta=0.05)

    def test_zero_strength_plants_nothing(self):
        self.assertLess(abs(self._class_gap(0.0)), 0.06)


if __name__ == '__main__':
    unittest.main()
