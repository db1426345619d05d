"""
Controlador del pipeline: ingest -> train-base -> train-fair -> audit -> report
Maneja la orquestación entre la configuración, los modelos y los artefactos
"""
import logging
import os

import pandas as pd

from config.artifacts import ArtifactStore
from config.settings import ARTIFACT_CONFIG
from controllers.audit_controller import AuditController
from models.bipartite_graph import build_adjacency
from models.datasets import carve_validation, generate_synthetic, parse_lastfm, parse_movielens, split_ratings
from models.fairgo import FairGoModel, train_adversarial
from models.metrics_report import MetricsReport
from models.rating_store import AttributeTable, RatingStore
from models.recommenders import EmbeddingMatrix, train_gcn, train_pmf
from utils.exceptions import FairGoError, ValidationError
from views.report_view import ReportView

logger = logging.getLogger(__name__)

PREREQUISITES = {
    'ingest': None,
    'train-base': 'ingest',
    'train-fair': 'train-base',
    'audit': 'train-fair',
    'report': 'audit'
}


def _write_curve(curve, path):
    pd.DataFrame(curve).to_csv(path, index=False, float_format='%.6f', lineterminator='\n')
    return path


class PipelineController:
    """
    Controlador para ejecutar las etapas de una corrida sobre un directorio de salida
    """

    def __init__(self, config):
        self.config = config
        self.artifacts = ArtifactStore(config.output_dir)
        self.hashes = config.stage_hashes()

    def run_stage(self, stage):
        """
        Ejecutar una etapa con el candado del directorio de salida

        Args:
            stage (str): ingest | train-base | train-fair | audit | report

        Returns:
            dict: Resultado de la operación con éxito/error y mensaje
        """
        if stage not in PREREQUISITES:
            return {
                'success': False,
                'message': f"Etapa desconocida: {stage}. Disponibles: {', '.join(ARTIFACT_CONFIG['stages'])}"
            }
        handler = {
            'ingest': self.ingest,
            'train-base': self.train_base,
            'train-fair': self.train_fair,
            'audit': self.audit,
            'report': self.report
        }[stage]
        try:
            with self.artifacts.lock():
                previous = PREREQUISITES[stage]
                if previous:
                    self.artifacts.require(previous, self.hashes[previous])
                logger.info(f"Ejecutando etapa '{stage}' en {self.config.output_dir}")
                paths, extra = handler()
                self.artifacts.record(stage, self.hashes[stage], paths, extra)
            return {
                'success': True,
                'message': f"Etapa '{stage}' completada ({len(paths)} artefactos)",
                'artifacts': paths
            }
        except FairGoError as e:
            logger.error(f"Error en la etapa '{stage}': {e}")
            return {
                'success': False,
                'message': str(e),
                'error_type': type(e).__name__
            }

    def run_all(self):
        """Ejecutar todas las etapas en orden; se detiene en la primera falla"""
        for stage in ARTIFACT_CONFIG['stages']:
            result = self.run_stage(stage)
            if not result['success']:
                return result
        return {'success': True, 'message': 'Pipeline completo'}

    def _load_ingest(self):
        directory = self.artifacts.stage_dir('ingest')
        store = RatingStore.load(directory)
        attributes = AttributeTable.load(directory).subset(list(self.config.attributes()))
        return store, attributes

    def ingest(self):
        """Leer o generar el dataset, particionar y guardar la tienda"""
        dataset = self.config.dataset
        seed = self.config.seed
        if dataset['name'] == 'movielens':
            store, attributes = parse_movielens(dataset['ratings_path'], dataset['users_path'])
        elif dataset['name'] == 'lastfm':
            store, attributes = parse_lastfm(dataset['ratings_path'], dataset['users_path'])
        else:
            synthetic = self.config.synthetic
            store, attributes = generate_synthetic(
                synthetic['users'], synthetic['items'], synthetic['density'], synthetic['cardinalities'],
                synthetic['strength'], seed, rank=synthetic['rank'], noise=synthetic['noise'],
                bias=synthetic['bias'], taste=synthetic['taste']
            )

        store = split_ratings(store, dataset['split_ratios'], seed)
        carved = len(dataset['split_ratios']) == 2 and dataset['validation_carve'] > 0
        if carved:
            store = carve_validation(store, dataset['validation_carve'], seed)
            logger.info(f"Se extrajo {dataset['validation_carve']:.0%} de train como validación interna")

        directory = self.artifacts.stage_dir('ingest', create=True)
        paths = store.save(directory) + attributes.save(directory)
        return paths, {'validation_carve_out': carved, 'splits': store.split_counts()}

    def train_base(self):
        """Entrenar PMF o GCN y guardar los embeddings originales"""
        store, _ = self._load_ingest()
        base_config = self.config.base_train_config()
        if self.config.base['model'] == 'gcn':
            embeddings, curve = train_gcn(store, build_adjacency(store), base_config, return_curve=True)
        else:
            embeddings, curve = train_pmf(store, base_config, return_curve=True)

        directory = self.artifacts.stage_dir('train-base', create=True)
        paths = [
            embeddings.save(os.path.join(directory, 'embeddings.npz'), 'embeddings',
                            self.config.seed, self.hashes['train-base']),
            _write_curve(curve, os.path.join(directory, 'curve.csv'))
        ]
        return paths, {'model': self.config.base['model']}

    def train_fair(self):
        """Entrenar filtros y discriminadores sobre los embeddings congelados"""
        store, attributes = self._load_ingest()
        embeddings = EmbeddingMatrix.load(self.artifacts.path('train-base', 'embeddings.npz'))
        if embeddings.user_count != store.user_count:
            raise ValidationError("Los embeddings base no corresponden a la tienda de calificaciones")
        adjacency = build_adjacency(store)
        model, curve = train_adversarial(
            embeddings, adjacency, attributes, self.config.summary_config(), self.config.fair_train_config(), store
        )

        directory = self.artifacts.stage_dir('train-fair', create=True)
        seed, hash_value = self.config.seed, self.hashes['train-fair']
        filtered = model.filter_embeddings(embeddings)
        paths = [
            model.save(os.path.join(directory, 'model.npz'), seed, hash_value),
            filtered.save(os.path.join(directory, 'filtered.npz'), 'filtered', seed, hash_value),
            _write_curve(curve, os.path.join(directory, 'curve.csv'))
        ]
        return paths, {'attributes': list(attributes.names)}

    def audit(self):
        """Medir precisión, fuga y equidad de grupo"""
        store, attributes = self._load_ingest()
        base = EmbeddingMatrix.load(self.artifacts.path('train-base', 'embeddings.npz'))
        model = FairGoModel.from_checkpoint(self.artifacts.path('train-fair', 'model.npz'))
        filtered = EmbeddingMatrix.load(self.artifacts.path('train-fair', 'filtered.npz'), 'filtered')
        if tuple(model.attribute_names) != tuple(attributes.names):
            raise ValidationError("El modelo FairGo se entrenó con otros atributos")

        ingest_entry = self.artifacts.read_manifest()['stages']['ingest']
        metadata = {
            'config_hash': self.hashes['audit'],
            'seed': self.config.seed,
            'dataset': self.config.dataset['name'],
            'base_model': self.config.base['model'],
            'summary_variant': model.summary.variant,
            'validation_carve_out': ingest_entry['extra'].get('validation_carve_out', False)
        }
        directory = self.artifacts.stage_dir('audit', create=True)
        controller = AuditController(
            store, attributes, build_adjacency(store), self.config.eval, self.config.attacker_config()
        )
        report, written = controller.build_report(base, filtered, metadata, directory)
        return [report.save(os.path.join(directory, 'metrics.json'))] + written, {}

    def report(self):
        """Unir las métricas en report.json y una tabla legible"""
        report = MetricsReport.load(self.artifacts.path('audit', 'metrics.json'))
        directory = self.artifacts.stage_dir('report', create=True)
        view = ReportView(report)
        paths = [report.save(os.path.join(directory, 'report.json'))]
        text_path = os.path.join(directory, 'report.txt')
        with open(text_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(view.render_text())
        paths.append(text_path)
        if self.config.eval['report_pdf']:
            paths.append(view.write_pdf(os.path.join(directory, 'report.pdf')))
        return paths, {}
