"""Grid detection loss with its analytic gradient."""
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from dockvision import exceptions
from dockvision.detector.encoding import GridEncoding, cell_box, iou
from dockvision.types import FloatArray

SQRT_CLAMP = 1e-8


class LossWeights(BaseModel):
    lambda_B: float = Field(3.0, ge=0, description="Weight of the box regression term.")
    lambda_d: float = Field(0.5, ge=0, description="Weight of the docking confidence.")
    lambda_dbar: float = Field(
        0.1, ge=0, description="Weight of the no docking confidences."
    )

    model_config = ConfigDict(extra='forbid', validate_assignment=True)


@dataclass
class LossTerms:
    l_B: float
    l_d: float
    l_dbar: float
    total: float
    grad: FloatArray
    responsible: int | None = None


def responsible_slot(pred: FloatArray, target: GridEncoding) -> int:
    """Slot of the dock cell whose current box overlaps the ground truth most."""
    row, col = target.dock_cell
    overlaps = []
    for slot in range(target.B):
        offsets = pred[row, col, slot, :4].copy()
        offsets[2:] = np.maximum(offsets[2:], 0.0)
        overlaps.append(iou(cell_box(offsets, row, col, target.G), target.box))
    return int(np.argmax(overlaps))


def loss(pred: FloatArray, target: GridEncoding, w: LossWeights) -> LossTerms:
    """
    total = lambda_B l_B + lambda_d l_d + lambda_dbar l_dbar. l_B and l_d cover the
     responsible box of the dock cell only, l_dbar every other confidence. The
     responsible slot is held constant when differentiating.
    """
    pred = np.asarray(pred, dtype=np.float64)
    if pred.shape != target.target.shape:
        raise exceptions.ShapeMismatch(
            f"Prediction shape {pred.shape} does not match {target.target.shape}."
        )
    if not np.all(np.isfinite(pred)):
        raise exceptions.NonFiniteInput("Predictions contain NaN or inf values.")

    grad = np.zeros_like(pred)
    confidences = pred[..., 4]
    others = np.ones(confidences.shape, dtype=bool)
    l_B = l_d = 0.0
    slot = None

    if target.dock_cell is not None:
        row, col = target.dock_cell
        slot = responsible_slot(pred, target)
        others[row, col, slot] = False
        p = pred[row, col, slot]
        t = target.target[row, col, slot]

        dxy = p[:2] - t[:2]
        sizes = np.maximum(p[2:4], SQRT_CLAMP)
        dwh = np.sqrt(sizes) - np.sqrt(t[2:4])
        l_B = float(np.sum(dxy**2) + np.sum(dwh**2))
        grad[row, col, slot, :2] = w.lambda_B * 2 * dxy
        grad[row, col, slot, 2:4] = np.where(
            p[2:4] > SQRT_CLAMP, w.lambda_B * dwh / np.sqrt(sizes), 0.0
        )

        l_d = float((p[4] - 1.0) ** 2)
        grad[row, col, slot, 4] = w.lambda_d * 2 * (p[4] - 1.0)

    l_dbar = float(np.sum(confidences[others] ** 2))
    grad[..., 4] += np.where(others, w.lambda_dbar * 2 * confidences, 0.0)

    total = w.lambda_B * l_B + w.lambda_d * l_d + w.lambda_dbar * l_dbar
    return LossTerms(
        l_B=l_B, l_d=l_d, l_dbar=l_dbar, total=total, grad=grad, responsible=slot
    )
