"""
Controlador de la auditoría: precisión, fuga de atributos y equidad de grupo
"""
import logging
import os

from models.attacker import leakage_audit_repeated
from models.fairgo import propagate_orders
from models.metrics import equal_opportunity, group_statistics, rmse, statistical_parity
from models.metrics_report import LeakageEntry, MetricsReport
from models.recommenders import predict_pairs
from utils.exceptions import InsufficientLabelsError, MissingDataError, NoScoredItemsError

logger = logging.getLogger(__name__)


class AuditController:
    """
    Construye el MetricsReport de una corrida a partir de sus artefactos
    """

    def __init__(self, store, attributes, adjacency, eval_config, attacker_config):
        self.store = store
        self.attributes = attributes
        self.adjacency = adjacency
        self.eval_config = eval_config
        self.attacker_config = attacker_config

    def test_triples(self):
        users, items, ratings = self.store.triples('test')
        if len(ratings) == 0:
            raise MissingDataError("La partición de prueba está vacía; no se puede auditar")
        return users, items, ratings

    def representations(self, base, filtered):
        """
        Vectores de usuario a auditar

        Returns:
            dict: nombre -> matriz (M, D); e_u, f_u y h^l de ambos espacios
        """
        m = self.store.user_count
        features = {'base': base.users, 'filtered': filtered.users}
        orders = self.eval_config['audit_orders']
        if orders:
            for source, embeddings in (('base', base), ('filtered', filtered)):
                hidden, _ = propagate_orders(self.adjacency, embeddings.values, orders)
                for order, h in enumerate(hidden, start=1):
                    features[f"{source}_h{order}"] = h[:m]
        return features

    def audit_leakage(self, base, filtered):
        entries = []
        seeds = self.eval_config['attacker_seeds']
        for representation, features in self.representations(base, filtered).items():
            for name in self.attributes.names:
                single = self.attributes.subset([name])
                try:
                    metric, value = leakage_audit_repeated(features, single, seeds, self.attacker_config)[name]
                except InsufficientLabelsError as e:
                    logger.warning(f"Auditoría de '{name}' sobre {representation} omitida: {e}")
                    continue
                entries.append(LeakageEntry(representation, name, metric, value))
        return entries

    def audit_fairness(self, predictions, output_dir=None):
        """
        Paridad estadística e igualdad de oportunidad por atributo

        Returns:
            tuple: (paridad, oportunidad, ítems omitidos, CSV escritos)
        """
        users, items, ratings = self.test_triples()
        parity, opportunity, skipped, written = {}, {}, {}, []
        for k, name in enumerate(self.attributes.names):
            groups = self.attributes.values[:, k]
            cardinality = self.attributes.cardinalities[k]
            try:
                parity[name], skipped[name] = statistical_parity(
                    users, items, predictions, groups, cardinality, return_skipped=True
                )
                opportunity[name], _ = equal_opportunity(
                    users, items, predictions, ratings, groups, cardinality, return_skipped=True
                )
            except NoScoredItemsError as e:
                logger.warning(f"Métricas de grupo de '{name}' omitidas: {e}")
                continue
            if output_dir and self.eval_config['group_stats_csv']:
                path = os.path.join(output_dir, f"group_stats_{name}.csv")
                table = group_statistics(users, items, predictions, groups)
                table.to_csv(path, float_format='%.6f', lineterminator='\n')
                written.append(path)
        return parity, opportunity, skipped, written

    def build_report(self, base, filtered, metadata, output_dir=None):
        """
        Auditar una corrida completa

        Args:
            base (EmbeddingMatrix): Embeddings originales
            filtered (EmbeddingMatrix): Embeddings filtrados
            metadata (dict): Semillas, hash de configuración y marcas
            output_dir (str|None): Directorio para los CSV de grupos

        Returns:
            tuple: (MetricsReport, CSV escritos)
        """
        users, items, ratings = self.test_triples()
        predictions = predict_pairs(filtered, users, items)
        report_rmse = rmse(predictions, ratings)
        base_rmse = rmse(predict_pairs(base, users, items), ratings)
        logger.info(f"RMSE de prueba: filtrado {report_rmse:.4f}, original {base_rmse:.4f}")

        leakage = self.audit_leakage(base, filtered)
        parity, opportunity, skipped, written = {}, {}, {}, []
        if self.eval_config['group_metrics']:
            parity, opportunity, skipped, written = self.audit_fairness(predictions, output_dir)

        report = MetricsReport(
            rmse=report_rmse,
            base_rmse=base_rmse,
            leakage=leakage,
            statistical_parity=parity,
            equal_opportunity=opportunity,
            skipped_items=skipped,
            metadata={**metadata, 'attacker_seeds': list(self.eval_config['attacker_seeds'])}
        )
        return report, written

