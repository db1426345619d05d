"""
Utilidades de formateo para reportes y registros de FairGo
"""
import math


class NumberFormatter:
    """Formateador de números"""

    @staticmethod
    def format_decimal(number, decimal_places=4):
        """
        Formatear un número real

        Args:
            number (float|int|None): Número a formatear
            decimal_places (int): Número de decimales

        Returns:
            str: Número formateado, '-' si falta o no es finito
        """
        if number is None:
            return "-"
        try:
            value = float(number)
        except (ValueError, TypeError):
            return "-"
        if not math.isfinite(value):
            return "-"
        return f"{value:.{decimal_places}f}"

    @staticmethod
    def format_percentage(number, decimal_places=2):
        """
        Formatear una proporción como porcentaje (0.15 = 15%)
        """
        if number is None:
            return "-"
        try:
            return f"{float(number) * 100:.{decimal_places}f}%"
        except (ValueError, TypeError):
            return "-"


class MetricFormatter:
    """Formateador de nombres y valores de métricas"""

    METRIC_LABELS = {
        'auc': 'AUC',
        'micro_f1': 'F1 micro',
        'rmse': 'RMSE'
    }

    @staticmethod
    def format_metric_name(metric):
        return MetricFormatter.METRIC_LABELS.get(metric, metric)

    @staticmethod
    def format_representation(name):
        """
        Nombre legible de una representación auditada

        Args:
            name (str): base, filtered, base_h2, filtered_h1...

        Returns:
            str: Nombre para tablas
        """
        if not name:
            return ""
        source, _, order = name.partition('_h')
        label = 'filtrado' if source == 'filtered' else 'original'
        return f"{label} orden {order}" if order else f"{label} usuario"

    @staticmethod
    def format_relative_change(value, reference):
        """Cambio relativo de value respecto a reference como porcentaje"""
        if value is None or not reference:
            return "-"
        return NumberFormatter.format_percentage((value - reference) / reference)


class TableFormatter:
    """Formateador de tablas de ancho fijo"""

    @staticmethod
    def format_table(headers, rows):
        """
        Tabla de texto alineada por columnas

        Args:
            headers (list): Encabezados
            rows (list): Filas (listas de str)

        Returns:
            str: Tabla con separador bajo los encabezados
        """
        cells = [[str(c) for c in headers]] + [[str(c) for c in row] for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
        lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in cells]
        lines.insert(1, "  ".join("-" * width for width in widths))
        return "\n".join(lines)


# Instancias globales para uso fácil
number_formatter = NumberFormatter()
metric_formatter = MetricFormatter()
table_formatter = TableFormatter()
