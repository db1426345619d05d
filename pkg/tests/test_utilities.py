"""
Tests unitarios para validadores, formateadores y la vista del reporte
"""
import unittest
import sys
import os
import tempfile

# Agregar el directorio padre al path para importar módulos
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.metrics_report import LeakageEntry, MetricsReport
from utils.exceptions import ConfigurationError, FairGoError, RatioSumInvalidError, ValidationError
from utils.formatters import MetricFormatter, NumberFormatter, TableFormatter
from utils.validators import BaseValidator, RunConfigValidator, SplitValidator
from views.report_view import ReportView


class TestBaseValidator(unittest.TestCase):
    """Tests para los validadores básicos"""

    def test_validate_required(self):
        BaseValidator.validate_required('x', 'campo')
        with self.assertRaises(ValidationError):
            BaseValidator.validate_required('  ', 'campo')
        with self.assertRaises(ValidationError):
            BaseValidator.validate_required(None, 'campo')

    def test_validate_float(self):
        self.assertEqual(BaseValidator.validate_float('0.25', 'lr', 0.0, 1.0), 0.25)
        with self.assertRaises(ValidationError):
            BaseValidator.validate_float('abc', 'lr')
        with self.assertRaises(ValidationError):
            BaseValidator.validate_float('nan', 'lr')
        with self.assertRaises(ValidationError):
            BaseValidator.validate_float('-1', 'lr', 0.0)

    def test_validate_integer(self):
        self.assertEqual(BaseValidator.validate_integer('12', 'epochs', 0), 12)
        with self.assertRaises(ValidationError):
            BaseValidator.validate_integer('1.5', 'epochs')
        with self.assertRaises(ValidationError):
            BaseValidator.validate_integer('-3', 'epochs', 0)

    def test_validate_choice_and_bool(self):
        self.assertEqual(BaseValidator.validate_choice('pmf', 'BASE_MODEL', ('pmf', 'gcn')), 'pmf')
        with self.assertRaises(ValidationError):
            BaseValidator.validate_choice('mf', 'BASE_MODEL', ('pmf', 'gcn'))
        self.assertTrue(BaseValidator.validate_bool('True', 'flag'))
        self.assertFalse(BaseValidator.validate_bool('off', 'flag'))
        with self.assertRaises(ValidationError):
            BaseValidator.validate_bool('quizás', 'flag')

    def test_parse_list(self):
        self.assertEqual(BaseValidator.parse_list('4, 1', 'w'), [4.0, 1.0])
        self.assertEqual(BaseValidator.parse_list('gender,age', 'a', cast=str), ['gender', 'age'])
        self.assertEqual(BaseValidator.parse_list('', 'a'), [])
        with self.assertRaises(ValidationError):
            BaseValidator.parse_list('16,x', 'h', cast=int)


class TestSplitValidator(unittest.TestCase):
    """Tests para las proporciones de partición"""

    def test_valid_ratios(self):
        self.assertEqual(SplitValidator().validar_proporciones(['0.7', '0.1', '0.2']), [0.7, 0.1, 0.2])

    def test_invalid_ratios(self):
        validator = SplitValidator()
        with self.assertRaises(RatioSumInvalidError):
            validator.validar_proporciones([0.5, 0.4])
        with self.assertRaises(RatioSumInvalidError):
            validator.validar_proporciones([1.0])
        with self.assertRaises(RatioSumInvalidError):
            validator.validar_proporciones([1.2, -0.2])


class TestRunConfigValidator(unittest.TestCase):
    """Tests para la validación de la configuración plana"""

    def test_errors_become_configuration_errors(self):
        from config.run_config import default_values
        values = default_values()
        values['BASE_MODEL'] = 'svd'
        with self.assertRaises(ConfigurationError):
            RunConfigValidator().validar_config(values)

    def test_exception_hierarchy(self):
        self.assertTrue(issubclass(ConfigurationError, FairGoError))
        self.assertTrue(issubclass(RatioSumInvalidError, ValidationError))


class TestFormatters(unittest.TestCase):
    """Tests para los formateadores"""

    def test_format_decimal(self):
        self.assertEqual(NumberFormatter.format_decimal(0.123456), '0.1235')
        self.assertEqual(NumberFormatter.format_decimal(2, 1), '2.0')
        self.assertEqual(NumberFormatter.format_decimal(None), '-')
        self.assertEqual(NumberFormatter.format_decimal(float('nan')), '-')

    def test_format_percentage(self):
        self.assertEqual(NumberFormatter.format_percentage(0.15), '15.00%')
        self.assertEqual(NumberFormatter.format_percentage(None), '-')

    def test_format_representation(self):
        self.assertEqual(MetricFormatter.format_representation('filtered'), 'filtrado usuario')
        self.assertEqual(MetricFormatter.format_representation('base_h2'), 'original orden 2')

    def test_relative_change(self):
        self.assertEqual(MetricFormatter.format_relative_change(1.1, 1.0), '10.00%')
        self.assertEqual(MetricFormatter.format_relative_change(1.1, None), '-')

    def test_format_table(self):
        text = TableFormatter.format_table(['A', 'Valor'], [['x', '1'], ['largo', '22']])
        lines = text.split('\n')
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[1].startswith('-----'))
        self.assertEqual(lines[3], 'largo  22')


class TestReportView(unittest.TestCase):
    """Tests para la vista del reporte"""

    def setUp(self):
        self.report = MetricsReport(
            rmse=0.91,
            base_rmse=0.87,
            leakage=[LeakageEntry('filtered', 'gender', 'auc', 0.52), LeakageEntry('base_h1', 'age', 'micro_f1', 0.4)],
            statistical_parity={'gender': 0.02},
            equal_opportunity={'gender': 0.03},
            skipped_items={'gender': 4},
            metadata={'validation_carve_out': True}
        )

    def test_render_text(self):
        text = ReportView(self.report).render_text()
        self.assertIn('RMSE filtrado', text)
        self.assertIn('filtrado usuario', text)
        self.assertIn('original orden 1', text)
        self.assertIn('extraída de train', text)
        self.assertIn('Equidad de grupo', text)

    def test_write_pdf(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = ReportView(self.report).write_pdf(os.path.join(tmp, 'report.pdf'))
            with open(path, 'rb') as f:
                self.assertEqual(f.read(4), b'%PDF')


if __name__ == '__main__':
    unittest.main()
