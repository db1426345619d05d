"""
Excepciones personalizadas de FairGo
"""

class FairGoError(Exception):
    """Excepción base para todo el sistema"""
    pass

class ValidationError(FairGoError):
    """Excepción para errores de validación de datos"""
    pass

class ConfigurationError(FairGoError):
    """Excepción para configuraciones de corrida inválidas o ausentes"""
    pass

class ParamInvalidError(ValidationError):
    """Parámetros de generación o entrenamiento fuera de rango"""
    pass

class RatioSumInvalidError(ValidationError):
    """Las proporciones de partición no suman 1"""
    pass

class MissingFileError(FairGoError):
    """Archivo de entrada inexistente o ilegible"""
    pass

class MissingDataError(FairGoError):
    """El archivo existe pero no contiene registros"""
    pass

class DataFormatError(FairGoError):
    """Excepción para líneas mal formadas en los archivos de datos"""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"línea {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number

class UnknownAgeCodeError(DataFormatError):
    """Código de edad de MovieLens no reconocido"""
    pass

class NonPositivePlayCountError(DataFormatError):
    """Conteo de reproducciones menor que 1"""
    pass

class ShapeMismatchError(FairGoError):
    """Dimensiones incompatibles entre parámetros y entradas"""
    pass

class IndexOutOfRangeError(FairGoError):
    """Índice de usuario o ítem fuera de rango"""
    pass

class GraphError(FairGoError):
    """Excepción para errores del grafo bipartito"""
    pass

class NodeOutOfRangeError(GraphError):
    """Nodo inexistente en la adyacencia"""
    pass

class TrainingError(FairGoError):
    """Excepción base para errores de entrenamiento"""
    pass

class EmptyTrainingSetError(TrainingError):
    """No hay tripletas de entrenamiento"""
    pass

class NoLabeledUsersError(TrainingError):
    """Ningún usuario tiene etiquetas de atributos sensibles"""
    pass

class DivergenceDetectedError(TrainingError):
    """La pérdida dejó de ser finita"""
    pass

class MetricError(FairGoError):
    """Excepción base para errores de métricas y auditoría"""
    pass

class EmptyInputError(MetricError):
    """Entradas vacías o de longitudes distintas"""
    pass

class SingleClassError(MetricError):
    """Solo hay una clase presente en las etiquetas"""
    pass

class InsufficientLabelsError(MetricError):
    """No hay suficientes usuarios etiquetados por clase"""
    pass

class NoScoredItemsError(MetricError):
    """Ningún ítem tiene raters de los grupos requeridos"""
    pass

class MissingAttributeError(MetricError):
    """El usuario no tiene etiqueta para el atributo solicitado"""
    pass

class MissingPrerequisiteError(FairGoError):
    """Faltan artefactos de una etapa previa o su hash no coincide"""
    pass

class ConcurrentRunError(FairGoError):
    """Otra etapa tiene tomado el directorio de salida"""
    pass
