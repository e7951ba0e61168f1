"""Report artifacts of the evaluation harness."""
import logging

from dockvision.evaluation.detection import RocCurve
from dockvision.evaluation.pose import PoseErrorStats
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.files import write_csv, write_json

logger = logging.getLogger(__name__)

ROC_HEADER = ['threshold', 'TP', 'FP', 'TN', 'FN', 'TPR', 'FPR']


def write_roc_csv(path: str, curve: RocCurve):
    write_csv(
        path,
        ROC_HEADER,
        (i.to_row() for i in curve.points),
        comment=f'schema_version={SCHEMA_VERSION}',
    )
    logger.debug(f"Wrote {len(curve.points)} ROC rows to {path}")


def write_summary_json(path: str, curve: RocCurve, extra: dict | None = None):
    """`{auc, n_pos, n_neg, schema_version}` plus any `extra` keys."""
    summary = curve.summary()
    summary.update(extra or {})
    summary['schema_version'] = SCHEMA_VERSION
    write_json(path, summary)


def write_roc_points(path: str, curve: RocCurve):
    """Two column FPR, TPR file ready for plotting."""
    write_csv(
        path,
        ['FPR', 'TPR'],
        ([i.fpr, i.tpr] for i in curve.points),
        comment=f'schema_version={SCHEMA_VERSION}',
    )


def write_pose_json(path: str, stats: PoseErrorStats, extra: dict | None = None):
    summary = stats.summary()
    summary.update(extra or {})
    summary['schema_version'] = SCHEMA_VERSION
    write_json(path, summary)
