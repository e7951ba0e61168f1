"""
Scoring of single object detections. Every scored sample contributes exactly one unit to
the confusion matrix at a given threshold, a prediction firing when its confidence is at
least the threshold:

    background sample                 fires -> FP, silent -> TN
    foreground, IoU >= iou_threshold  fires -> TP, silent -> FN
    foreground, IoU <  iou_threshold  fires -> FP, silent -> FN
"""
import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from dockvision import exceptions
from dockvision.detector.encoding import iou
from dockvision.types import BoxType, FloatArray

logger = logging.getLogger(__name__)

IOU_THRESHOLD = 0.5

DetectionLabel = Literal['positive-correct', 'positive-wrong', 'negative']


@dataclass(frozen=True)
class ScoredDetection:
    sample_id: str
    box: BoxType
    confidence: float
    gt_box: BoxType | None = None

    def __post_init__(self):
        if not np.isfinite(self.confidence):
            raise exceptions.NonFiniteInput(
                f"Detection {self.sample_id} has confidence {self.confidence}."
            )

    @property
    def is_foreground(self) -> bool:
        return self.gt_box is not None

    @classmethod
    def from_record(cls, record: dict) -> 'ScoredDetection':
        """Build from a line of a detections file."""
        gt_box = record.get('gt_box')
        return cls(
            sample_id=record['id'],
            box=tuple(record['box']),
            confidence=float(record['confidence']),
            gt_box=tuple(gt_box) if gt_box is not None else None,
        )


def label_detection(
    pred_box: BoxType,
    gt_box: BoxType | None,
    iou_threshold: float = IOU_THRESHOLD,
) -> DetectionLabel:
    if gt_box is None:
        return 'negative'
    if iou(pred_box, gt_box) >= iou_threshold:
        return 'positive-correct'
    return 'positive-wrong'


@dataclass(frozen=True)
class ConfusionCounts:
    TP: int = 0
    FP: int = 0
    TN: int = 0
    FN: int = 0

    @property
    def total(self) -> int:
        return self.TP + self.FP + self.TN + self.FN

    @property
    def tpr(self) -> float:
        denominator = self.TP + self.FN
        return self.TP / denominator if denominator else 0.0

    @property
    def fpr(self) -> float:
        denominator = self.FP + self.TN
        return self.FP / denominator if denominator else 0.0


def _categories(
    detections: list[ScoredDetection], iou_threshold: float
) -> tuple[FloatArray, np.ndarray, np.ndarray, np.ndarray]:
    labels = [label_detection(d.box, d.gt_box, iou_threshold) for d in detections]
    confidences = np.array([d.confidence for d in detections], dtype=np.float64)
    correct = np.array([i == 'positive-correct' for i in labels], dtype=bool)
    wrong = np.array([i == 'positive-wrong' for i in labels], dtype=bool)
    background = np.array([i == 'negative' for i in labels], dtype=bool)
    return confidences, correct, wrong, background


def _counts(n_correct, n_wrong, n_background, fired_correct, fired_wrong, fired_bg):
    return ConfusionCounts(
        TP=int(fired_correct),
        FP=int(fired_wrong + fired_bg),
        TN=int(n_background - fired_bg),
        FN=int(n_correct - fired_correct + n_wrong - fired_wrong),
    )


def confusion_at(
    detections: list[ScoredDetection],
    threshold: float,
    iou_threshold: float = IOU_THRESHOLD,
) -> ConfusionCounts:
    """Confusion matrix when predictions with confidence >= `threshold` fire."""
    if not detections:
        return ConfusionCounts()
    confidences, correct, wrong, background = _categories(detections, iou_threshold)
    fired = confidences >= threshold
    return _counts(
        correct.sum(),
        wrong.sum(),
        background.sum(),
        (fired & correct).sum(),
        (fired & wrong).sum(),
        (fired & background).sum(),
    )


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    counts: ConfusionCounts

    @property
    def tpr(self) -> float:
        return self.counts.tpr

    @property
    def fpr(self) -> float:
        return self.counts.fpr

    def to_row(self) -> list:
        c = self.counts
        return [self.threshold, c.TP, c.FP, c.TN, c.FN, self.tpr, self.fpr]


@dataclass
class RocCurve:
    """Points ordered from threshold +inf down to -inf, ie by nondecreasing FPR."""

    points: list[RocPoint] = field(default_factory=list)
    auc: float = 0.0
    n_pos: int = 0
    n_neg: int = 0

    @property
    def fpr(self) -> FloatArray:
        return np.array([i.fpr for i in self.points])

    @property
    def tpr(self) -> FloatArray:
        return np.array([i.tpr for i in self.points])

    @property
    def thresholds(self) -> FloatArray:
        return np.array([i.threshold for i in self.points])

    def summary(self) -> dict:
        return {'auc': self.auc, 'n_pos': self.n_pos, 'n_neg': self.n_neg}


def trapezoid_area(x: FloatArray, y: FloatArray) -> float:
    x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
    return float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def roc_curve(
    detections: list[ScoredDetection], iou_threshold: float = IOU_THRESHOLD
) -> RocCurve:
    """
    Sweep the firing threshold over +inf, every distinct confidence in descending order
     and -inf. Tied confidences switch on together so a tie between a positive and a
     negative adds a diagonal segment, worth half a pair, to the trapezoidal area.
     The -inf point has FPR 1 and TPR the share of foregrounds with a correct box, so
     it only reaches (1, 1) when no box misses.
    """
    confidences, correct, wrong, background = _categories(detections, iou_threshold)
    n_pos = int(correct.sum() + wrong.sum())
    n_neg = int(background.sum())
    if n_pos == 0 or n_neg == 0:
        raise exceptions.DegenerateLabels(
            f"ROC needs foreground and background samples, got n_pos={n_pos} "
            f"n_neg={n_neg}."
        )

    order = np.argsort(-confidences, kind='stable')
    ordered = confidences[order]
    cum_correct = np.cumsum(correct[order])
    cum_wrong = np.cumsum(wrong[order])
    cum_bg = np.cumsum(background[order])
    # Last index of every run of equal confidences
    ends = np.append(np.flatnonzero(np.diff(ordered) != 0), len(ordered) - 1)

    totals = (int(correct.sum()), int(wrong.sum()), n_neg)
    points = [RocPoint(np.inf, _counts(*totals, 0, 0, 0))]
    for end in ends:
        points.append(
            RocPoint(
                float(ordered[end]),
                _counts(*totals, cum_correct[end], cum_wrong[end], cum_bg[end]),
            )
        )
    points.append(
        RocPoint(-np.inf, _counts(*totals, cum_correct[-1], cum_wrong[-1], cum_bg[-1]))
    )

    curve = RocCurve(points=points, n_pos=n_pos, n_neg=n_neg)
    curve.auc = trapezoid_area(curve.fpr, curve.tpr)
    logger.debug(
        f"ROC over {len(detections)} detections, {len(ends)} distinct confidences, "
        f"auc={curve.auc:.6f}"
    )
    return curve


def mann_whitney_auc(pos_scores, neg_scores) -> float:
    """
    Probability that a random positive outscores a random negative, ties counted 1/2,
     by brute force over all pairs.
    """
    pos = np.asarray(pos_scores, dtype=np.float64).reshape(-1, 1)
    neg = np.asarray(neg_scores, dtype=np.float64).reshape(1, -1)
    if pos.size == 0 or neg.size == 0:
        raise exceptions.DegenerateLabels("Both score sets need at least one entry.")
    wins = (pos > neg).sum() + 0.5 * (pos == neg).sum()
    return float(wins / (pos.size * neg.size))
