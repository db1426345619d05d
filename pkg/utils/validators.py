"""
Validadores de parámetros y configuraciones de corrida
"""
import math
from utils.exceptions import ValidationError, ConfigurationError, RatioSumInvalidError

class BaseValidator:
    """Clase base para validadores"""

    @staticmethod
    def validate_required(value, field_name):
        """Validar que un campo requerido no esté vacío"""
        if value is None or (isinstance(value, str) and not value.strip()):
            raise ValidationError(f"El campo '{field_name}' es requerido")

    @staticmethod
    def validate_float(value, field_name, min_value=None, max_value=None):
        """Validar que un valor sea un real finito dentro de un rango"""
        try:
            float_value = float(value)
        except (ValueError, TypeError):
            raise ValidationError(f"El campo '{field_name}' debe ser un número válido")
        if not math.isfinite(float_value):
            raise ValidationError(f"El campo '{field_name}' debe ser finito")
        if min_value is not None and float_value < min_value:
            raise ValidationError(f"El campo '{field_name}' debe ser mayor o igual a {min_value}")
        if max_value is not None and float_value > max_value:
            raise ValidationError(f"El campo '{field_name}' debe ser menor o igual a {max_value}")
        return float_value

    @staticmethod
    def validate_integer(value, field_name, min_value=None, max_value=None):
        """Validar que un valor sea un entero válido"""
        try:
            int_value = int(value)
        except (ValueError, TypeError):
            raise ValidationError(f"El campo '{field_name}' debe ser un número entero válido")
        if min_value is not None and int_value < min_value:
            raise ValidationError(f"El campo '{field_name}' debe ser mayor o igual a {min_value}")
        if max_value is not None and int_value > max_value:
            raise ValidationError(f"El campo '{field_name}' debe ser menor o igual a {max_value}")
        return int_value

    @staticmethod
    def validate_choice(value, field_name, choices):
        """Validar que un valor pertenezca a un conjunto permitido"""
        if value not in choices:
            raise ValidationError(
                f"Valor inválido para '{field_name}': {value}. Valores válidos: {', '.join(choices)}"
            )
        return value

    @staticmethod
    def validate_bool(value, field_name):
        """Interpretar banderas true/false de la configuración"""
        text = str(value).strip().lower()
        if text in ('1', 'true', 'yes', 'si', 'on'):
            return True
        if text in ('0', 'false', 'no', 'off', ''):
            return False
        raise ValidationError(f"El campo '{field_name}' debe ser true o false")

    @staticmethod
    def parse_list(value, field_name, cast=float):
        """Convertir una lista separada por comas"""
        if value is None or not str(value).strip():
            return []
        try:
            return [cast(part.strip()) for part in str(value).split(',') if part.strip()]
        except (ValueError, TypeError):
            raise ValidationError(f"El campo '{field_name}' debe ser una lista separada por comas")

class SplitValidator(BaseValidator):
    """Validador de proporciones de partición"""

    def validar_proporciones(self, ratios):
        """
        Validar proporciones train/test o train/validation/test

        Args:
            ratios (list): Proporciones de cada partición

        Returns:
            list: Proporciones como reales
        """
        if len(ratios) not in (2, 3):
            raise RatioSumInvalidError("Se esperan 2 (train/test) o 3 (train/validation/test) proporciones")
        values = [float(r) for r in ratios]
        if any(r < 0 for r in values):
            raise RatioSumInvalidError("Las proporciones no pueden ser negativas")
        if abs(sum(values) - 1.0) > 1e-6:
            raise RatioSumInvalidError(f"Las proporciones deben sumar 1, suman {sum(values):.6f}")
        return values

class RunConfigValidator(BaseValidator):
    """Validador para la configuración de una corrida"""

    DATASETS = ('movielens', 'lastfm', 'synthetic')
    BASE_MODELS = ('pmf', 'gcn')
    SUMMARY_VARIANTS = ('first_order', 'value_aggregation', 'learned', 'mean')

    def validar_config(self, values):
        """
        Validar y tipar todos los campos de una configuración plana

        Args:
            values (dict): Pares clave-valor como texto

        Returns:
            dict: Valores tipados por sección
        """
        try:
            dataset = self.validar_dataset(values)
            base = self.validar_modelo_base(values)
            fair = self.validar_fair(values)
            evaluation = self.validar_eval(values)
            synthetic = self.validar_sintetico(values)
            seed = self.validate_integer(values.get('SEED'), 'SEED', 0)
            self.validate_required(values.get('OUTPUT_DIR'), 'OUTPUT_DIR')
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e

        return {
            'dataset': dataset,
            'base': base,
            'fair': fair,
            'eval': evaluation,
            'synthetic': synthetic,
            'seed': seed,
            'output_dir': values['OUTPUT_DIR'].strip()
        }

    def validar_dataset(self, values):
        """Validar la sección de datos"""
        name = self.validate_choice(values.get('DATASET_NAME', '').strip().lower(), 'DATASET_NAME', self.DATASETS)
        if name != 'synthetic':
            self.validate_required(values.get('RATINGS_PATH'), 'RATINGS_PATH')
            self.validate_required(values.get('USERS_PATH'), 'USERS_PATH')
        ratios = SplitValidator().validar_proporciones(self.parse_list(values.get('SPLIT_RATIOS'), 'SPLIT_RATIOS'))
        carve = self.validate_float(values.get('VALIDATION_CARVE', 0), 'VALIDATION_CARVE', 0.0, 0.99)
        return {
            'name': name,
            'ratings_path': (values.get('RATINGS_PATH') or '').strip(),
            'users_path': (values.get('USERS_PATH') or '').strip(),
            'split_ratios': ratios,
            'validation_carve': carve,
            'attributes': self.parse_list(values.get('ATTRIBUTES'), 'ATTRIBUTES', cast=str)
        }

    def validar_modelo_base(self, values):
        """Validar la sección del modelo base"""
        return {
            'model': self.validate_choice(values.get('BASE_MODEL', '').strip().lower(), 'BASE_MODEL', self.BASE_MODELS),
            'dim': self.validate_integer(values.get('EMBEDDING_DIM'), 'EMBEDDING_DIM', 1),
            'epochs': self.validate_integer(values.get('BASE_EPOCHS'), 'BASE_EPOCHS', 0),
            'batch_size': self.validate_integer(values.get('BASE_BATCH_SIZE'), 'BASE_BATCH_SIZE', 1),
            'lr': self.validate_float(values.get('BASE_LR'), 'BASE_LR', 1e-12),
            'l2': self.validate_float(values.get('BASE_L2'), 'BASE_L2', 0.0),
            'layers': self.validate_integer(values.get('GCN_LAYERS'), 'GCN_LAYERS', 0)
        }

    def validar_fair(self, values):
        """Validar la sección del entrenamiento adversarial"""
        variant = self.validate_choice(
            values.get('SUMMARY_VARIANT', '').strip().lower(), 'SUMMARY_VARIANT', self.SUMMARY_VARIANTS
        )
        order = self.validate_integer(values.get('SUMMARY_ORDER'), 'SUMMARY_ORDER', 1)
        weights = self.parse_list(values.get('SUMMARY_WEIGHTS'), 'SUMMARY_WEIGHTS')
        if any(w < 0 for w in weights):
            raise ValidationError("Los pesos de SUMMARY_WEIGHTS deben ser no negativos")
        return {
            'lambda': self.validate_float(values.get('FAIR_LAMBDA'), 'FAIR_LAMBDA', 0.0),
            'epochs': self.validate_integer(values.get('FAIR_EPOCHS'), 'FAIR_EPOCHS', 0),
            'batch_size': self.validate_integer(values.get('FAIR_BATCH_SIZE'), 'FAIR_BATCH_SIZE', 1),
            'filter_lr': self.validate_float(values.get('FILTER_LR'), 'FILTER_LR', 1e-12),
            'discriminator_lr': self.validate_float(values.get('DISCRIMINATOR_LR'), 'DISCRIMINATOR_LR', 1e-12),
            'discriminator_steps': self.validate_integer(values.get('DISCRIMINATOR_STEPS'), 'DISCRIMINATOR_STEPS', 1),
            'discriminator_warmup': self.validate_integer(values.get('DISCRIMINATOR_WARMUP'), 'DISCRIMINATOR_WARMUP', 0),
            'warmup_users': self.validate_integer(values.get('WARMUP_USERS'), 'WARMUP_USERS', 1),
            'filter_hidden': self.parse_list(values.get('FILTER_HIDDEN'), 'FILTER_HIDDEN', cast=int),
            'discriminator_hidden': self.parse_list(values.get('DISCRIMINATOR_HIDDEN'), 'DISCRIMINATOR_HIDDEN', cast=int),
            'leaky_slope': self.validate_float(values.get('LEAKY_SLOPE'), 'LEAKY_SLOPE', 1e-9, 0.999999),
            'variant': variant,
            'order': order,
            'weights': weights,
            'aggregation_hidden': self.parse_list(values.get('AGGREGATION_HIDDEN'), 'AGGREGATION_HIDDEN', cast=int),
            'neighbor_cap': self.validate_integer(values.get('NEIGHBOR_CAP'), 'NEIGHBOR_CAP', 1)
        }

    def validar_eval(self, values):
        """Validar la sección de auditoría"""
        seeds = self.parse_list(values.get('ATTACKER_SEEDS'), 'ATTACKER_SEEDS', cast=int)
        if not seeds:
            raise ValidationError("ATTACKER_SEEDS requiere al menos una semilla")
        return {
            'attacker_seeds': seeds,
            'attacker_epochs': self.validate_integer(values.get('ATTACKER_EPOCHS'), 'ATTACKER_EPOCHS', 1),
            'attacker_lr': self.validate_float(values.get('ATTACKER_LR'), 'ATTACKER_LR', 1e-12),
            'audit_orders': self.validate_integer(values.get('AUDIT_ORDERS'), 'AUDIT_ORDERS', 0),
            'group_metrics': self.validate_bool(values.get('GROUP_METRICS'), 'GROUP_METRICS'),
            'group_stats_csv': self.validate_bool(values.get('GROUP_STATS_CSV'), 'GROUP_STATS_CSV'),
            'report_pdf': self.validate_bool(values.get('REPORT_PDF'), 'REPORT_PDF')
        }

    def validar_sintetico(self, values):
        """Validar la sección del generador sintético"""
        return {
            'users': self.validate_integer(values.get('SYNTH_USERS'), 'SYNTH_USERS', 1),
            'items': self.validate_integer(values.get('SYNTH_ITEMS'), 'SYNTH_ITEMS', 1),
            'density': self.validate_float(values.get('SYNTH_DENSITY'), 'SYNTH_DENSITY', 1e-9, 1.0),
            'cardinalities': self.parse_list(values.get('SYNTH_CARDINALITIES'), 'SYNTH_CARDINALITIES', cast=int),
            'strength': self.validate_float(values.get('SYNTH_STRENGTH'), 'SYNTH_STRENGTH', 0.0, 1.0),
            'rank': self.validate_integer(values.get('SYNTH_RANK'), 'SYNTH_RANK', 1),
            'noise': self.validate_float(values.get('SYNTH_NOISE'), 'SYNTH_NOISE', 0.0),
            'bias': self.validate_float(values.get('SYNTH_BIAS'), 'SYNTH_BIAS', 0.0),
            'taste': self.validate_float(values.get('SYNTH_TASTE'), 'SYNTH_TASTE', 0.0)
        }
