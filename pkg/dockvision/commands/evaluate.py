import logging

from pydantic import Field

from dockvision.evaluation.detection import (
    IOU_THRESHOLD,
    ScoredDetection,
    label_detection,
    roc_curve,
)
from dockvision.evaluation.reports import (
    write_roc_csv,
    write_roc_points,
    write_summary_json,
)
from dockvision.models import BaseCommand
from dockvision.utils.console import print_table
from dockvision.utils.files import read_jsonl

logger = logging.getLogger(__name__)


class EvalCommand(BaseCommand):
    """Score a detections file: ROC table, AUC summary and plot ready points."""

    command_name = 'eval'

    detections: str | None = Field(
        None, description="Detections JSONL, defaults to paths.detections."
    )
    iou_threshold: float = Field(
        IOU_THRESHOLD, gt=0, le=1, description="IoU a correct box must reach."
    )
    quiet: bool = Field(False, description="Do not print the summary table.")

    def exec(self) -> dict:
        config = self.run_config
        source = self.detections or config.path('detections')
        detections = [ScoredDetection.from_record(i) for i in read_jsonl(source)]
        curve = roc_curve(detections, iou_threshold=self.iou_threshold)

        labels = [
            label_detection(i.box, i.gt_box, self.iou_threshold) for i in detections
        ]
        extra = {
            'iou_threshold': self.iou_threshold,
            'correct_boxes': labels.count('positive-correct'),
            'wrong_boxes': labels.count('positive-wrong'),
        }
        write_roc_csv(config.path('roc'), curve)
        write_roc_points(config.path('roc_points'), curve)
        write_summary_json(config.path('summary'), curve, extra=extra)

        summary = {**curve.summary(), **extra}
        if not self.quiet:
            print_table(
                ['auc', 'n_pos', 'n_neg', 'correct boxes', 'wrong boxes'],
                [
                    [
                        curve.auc,
                        curve.n_pos,
                        curve.n_neg,
                        extra['correct_boxes'],
                        extra['wrong_boxes'],
                    ]
                ],
                title=source,
            )
        return summary
