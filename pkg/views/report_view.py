"""
Vista del reporte final: tabla de texto y PDF opcional
"""
import logging

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from config.settings import APP_CONFIG
from utils.formatters import MetricFormatter, NumberFormatter, TableFormatter

logger = logging.getLogger(__name__)


class ReportView:
    """
    Renderiza un MetricsReport para lectura humana
    """

    def __init__(self, report):
        self.report = report

    def summary_rows(self):
        report = self.report
        rows = [
            ['RMSE filtrado', NumberFormatter.format_decimal(report.rmse)],
            ['RMSE original', NumberFormatter.format_decimal(report.base_rmse)],
            ['Cambio de RMSE', MetricFormatter.format_relative_change(report.rmse, report.base_rmse)]
        ]
        if report.metadata.get('validation_carve_out'):
            rows.append(['Validación', 'extraída de train'])
        return rows

    def leakage_rows(self):
        return [
            [MetricFormatter.format_representation(e.representation), e.attribute,
             MetricFormatter.format_metric_name(e.metric), NumberFormatter.format_decimal(e.value)]
            for e in self.report.leakage
        ]

    def fairness_rows(self):
        attributes = sorted(set(self.report.statistical_parity) | set(self.report.equal_opportunity))
        return [
            [name,
             NumberFormatter.format_decimal(self.report.statistical_parity.get(name)),
             NumberFormatter.format_decimal(self.report.equal_opportunity.get(name)),
             str(self.report.skipped_items.get(name, 0))]
            for name in attributes
        ]

    def render_text(self):
        """
        Tablas de precisión, fuga y equidad

        Returns:
            str: Texto listo para report.txt
        """
        sections = [
            f"{APP_CONFIG['name']} - reporte de métricas",
            "",
            TableFormatter.format_table(['Métrica', 'Valor'], self.summary_rows()),
            "",
            "Fuga de atributos (atacante lineal)",
            TableFormatter.format_table(['Representación', 'Atributo', 'Métrica', 'Valor'], self.leakage_rows())
        ]
        fairness = self.fairness_rows()
        if fairness:
            sections += [
                "",
                "Equidad de grupo",
                TableFormatter.format_table(
                    ['Atributo', 'Paridad estadística', 'Igualdad de oportunidad', 'Ítems omitidos'], fairness
                )
            ]
        return "\n".join(sections) + "\n"

    def write_pdf(self, path):
        """Generar el reporte en PDF con reportlab"""
        styles = getSampleStyleSheet()
        style = TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), colors.lightgrey),
            ('GRID', (0, 0), (-1, -1), 0.5, colors.grey),
            ('FONTSIZE', (0, 0), (-1, -1), 9)
        ])
        story = [Paragraph(f"{APP_CONFIG['name']} - reporte de métricas", styles['Title'])]
        blocks = [
            ('Precisión', ['Métrica', 'Valor'], self.summary_rows()),
            ('Fuga de atributos', ['Representación', 'Atributo', 'Métrica', 'Valor'], self.leakage_rows()),
            ('Equidad de grupo', ['Atributo', 'Paridad', 'Oportunidad', 'Omitidos'], self.fairness_rows())
        ]
        for title, headers, rows in blocks:
            if not rows:
                continue
            story.append(Paragraph(title, styles['Heading2']))
            table = Table([headers] + rows)
            table.setStyle(style)
            story += [table, Spacer(1, 12)]
        SimpleDocTemplate(path, pagesize=A4).build(story)
        logger.info(f"Reporte PDF generado en {path}")
        return path
