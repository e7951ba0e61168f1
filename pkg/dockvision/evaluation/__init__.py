from dockvision.evaluation.detection import (
    ConfusionCounts,
    RocCurve,
    RocPoint,
    ScoredDetection,
    confusion_at,
    label_detection,
    mann_whitney_auc,
    roc_curve,
)
from dockvision.evaluation.pose import (
    PoseErrorStats,
    TrialError,
    pose_errors,
    trial_error,
)
from dockvision.evaluation.reports import (
    write_pose_json,
    write_roc_csv,
    write_roc_points,
    write_summary_json,
)

__all__ = [
    'ConfusionCounts',
    'PoseErrorStats',
    'RocCurve',
    'RocPoint',
    'ScoredDetection',
    'TrialError',
    'confusion_at',
    'label_detection',
    'mann_whitney_auc',
    'pose_errors',
    'roc_curve',
    'trial_error',
    'write_pose_json',
    'write_roc_csv',
    'write_roc_points',
    'write_summary_json',
]
