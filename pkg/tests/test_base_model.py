"""
Pruebas para la clase base de modelos y los checkpoints
"""
import unittest
import sys
import os
import json
import tempfile

import numpy as np

# Agregar el directorio padre al path para importar módulos
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.base_model import BaseModel, load_checkpoint, mlp_arrays, restore_mlp, save_checkpoint
from models.tensor_nn import build_mlp
from utils.exceptions import MissingFileError, ShapeMismatchError, ValidationError


class _VectorModel(BaseModel):
    def __init__(self, size=3):
        self.vector = np.zeros(size)

    def get_model_name(self):
        return 'vector'

    def named_arrays(self):
        return {'vector': self.vector}

    def restore_arrays(self, arrays):
        self.vector = arrays['vector'].copy()


class TestBaseModel(unittest.TestCase):
    """Tests para BaseModel"""

    def setUp(self):
        self.temp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.temp.name, 'model.npz')

    def tearDown(self):
        self.temp.cleanup()

    def test_base_model_abstract(self):
        with self.assertRaises(TypeError):
            BaseModel()

    def test_save_and_load(self):
        model = _VectorModel()
        model.vector = np.array([1.0, -2.0, 0.5])
        model.save(self.path, seed=3, hash_value='abc', extra={'note': 'x'})

        restored = _VectorModel()
        meta = restored.load(self.path)
        np.testing.assert_array_equal(restored.vector, [1.0, -2.0, 0.5])
        self.assertEqual(meta['kind'], 'vector')
        self.assertEqual(meta['version'], 1)
        self.assertEqual(meta['seed'], 3)
        self.assertEqual(meta['shapes'], {'vector': [3]})
        self.assertEqual(meta['extra'], {'note': 'x'})

    def test_kind_mismatch(self):
        save_checkpoint(self.path, {'vector': np.zeros(3)}, 'other')
        with self.assertRaises(ValidationError):
            _VectorModel().load(self.path)

    def test_missing_file(self):
        with self.assertRaises(MissingFileError):
            load_checkpoint(os.path.join(self.temp.name, 'nada.npz'))

    def test_unknown_format(self):
        meta = json.dumps({'format': 'otro', 'version': 1, 'kind': 'vector', 'shapes': {}})
        with open(self.path, 'wb') as f:
            np.savez(f, __meta__=np.array(meta), vector=np.zeros(3))
        with self.assertRaises(ValidationError):
            load_checkpoint(self.path)

    def test_shape_mismatch(self):
        meta = json.dumps({'format': 'fairgo-checkpoint', 'version': 1, 'kind': 'vector',
                           'shapes': {'vector': [4]}})
        with open(self.path, 'wb') as f:
            np.savez(f, __meta__=np.array(meta), vector=np.zeros(3))
        with self.assertRaises(ShapeMismatchError):
            load_checkpoint(self.path)


class TestMlpArrays(unittest.TestCase):
    """Tests para la serialización de MLPs"""

    def test_restore_mlp(self):
        source = build_mlp([4, 3, 2], seed=0)
        target = build_mlp([4, 3, 2], seed=1)
        arrays = mlp_arrays('net', source)
        self.assertEqual(sorted(arrays), ['net.b0', 'net.b1', 'net.w0', 'net.w1'])

        restore_mlp('net', target, arrays)
        for a, b in zip(source.weights, target.weights):
            np.testing.assert_array_equal(a, b)


if __name__ == '__main__':
    unittest.main()
