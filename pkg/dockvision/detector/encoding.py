"""
Grid encoding of a single docking station box. Boxes are normalized (x, y, w, h) with
(x, y) the top left corner. Inside the grid tensor a box is stored as the offset of its
centre within the owning cell, scaled by G, plus its image normalized width and height.
"""
from dataclasses import dataclass

import numpy as np

from dockvision import exceptions
from dockvision.types import BoxType, FloatArray

BOX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GridEncoding:
    """
    `target` has shape (G, G, B, 5) holding (x, y, w, h, S) per box. `dock_cell` is the
     (row, col) of the cell owning the station centre, None for background samples.
    """

    G: int
    B: int
    target: FloatArray
    dock_cell: tuple[int, int] | None = None
    box: BoxType | None = None

    @property
    def dock(self) -> np.ndarray:
        """l^dock_i as a (G, G) mask."""
        mask = np.zeros((self.G, self.G), dtype=bool)
        if self.dock_cell is not None:
            mask[self.dock_cell] = True
        return mask

    @property
    def nodock(self) -> np.ndarray:
        return ~self.dock


def check_box(box: BoxType):
    x, y, w, h = box
    if not np.all(np.isfinite(box)):
        raise exceptions.BoxOutOfRange(f"Box {box} is not finite.")
    if (
        w < 0
        or h < 0
        or x < -BOX_TOLERANCE
        or y < -BOX_TOLERANCE
        or x + w > 1 + BOX_TOLERANCE
        or y + h > 1 + BOX_TOLERANCE
    ):
        raise exceptions.BoxOutOfRange(f"Box {box} leaves the unit square.")


def owning_cell(cx: float, cy: float, G: int) -> tuple[int, int]:
    """(row, col). A centre on a cell boundary belongs to the higher index cell."""
    col = min(int(np.floor(cx * G)), G - 1)
    row = min(int(np.floor(cy * G)), G - 1)
    return max(row, 0), max(col, 0)


def encode_target(box: BoxType | None, G: int = 7, B: int = 2) -> GridEncoding:
    target = np.zeros((G, G, B, 5))
    if box is None:
        return GridEncoding(G=G, B=B, target=target)
    check_box(box)
    x, y, w, h = (float(i) for i in box)
    cx, cy = x + w / 2, y + h / 2
    row, col = owning_cell(cx, cy, G)
    target[row, col, :, :4] = (cx * G - col, cy * G - row, w, h)
    target[row, col, 0, 4] = 1.0
    return GridEncoding(G=G, B=B, target=target, dock_cell=(row, col), box=(x, y, w, h))


def cell_box(offsets: FloatArray, row: int, col: int, G: int) -> BoxType:
    """Cell relative (x, y, w, h) back to a normalized top left box."""
    ox, oy, w, h = (float(i) for i in offsets[:4])
    cx, cy = (col + ox) / G, (row + oy) / G
    return cx - w / 2, cy - h / 2, w, h


def iou(box_a: BoxType, box_b: BoxType) -> float:
    """Intersection over union, 0 for disjoint or zero area boxes."""
    ax, ay, aw, ah = box_a
    bx, by, bw, bh = box_b
    if min(aw, ah, bw, bh) < 0:
        raise exceptions.BoxOutOfRange("Boxes need nonnegative width and height.")
    inter_w = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    inter_h = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    intersection = inter_w * inter_h
    union = aw * ah + bw * bh - intersection
    if union <= 0:
        return 0.0
    return float(intersection / union)


@dataclass(frozen=True)
class Detection:
    box: BoxType
    box_px: BoxType
    confidence: float
    cell: tuple[int, int]
    slot: int
    confidence_map: FloatArray

    def to_dict(self) -> dict:
        return {
            'box': list(self.box),
            'box_px': list(self.box_px),
            'confidence': self.confidence,
            'cell': list(self.cell),
            'slot': self.slot,
        }


def decode_prediction(
    pred: FloatArray, image_width: int = 1, image_height: int = 1
) -> Detection:
    """
    Box of the highest confidence over every (cell, slot), the lowest flat index
     winning ties. Offsets and sizes are clamped to [0, 1]. Also returns the (G, G) map
     of per cell maximum confidence.
    """
    pred = np.asarray(pred, dtype=np.float64)
    if pred.ndim != 4 or pred.shape[0] != pred.shape[1] or pred.shape[3] != 5:
        raise exceptions.ShapeMismatch(
            f"Predictions need shape (G, G, B, 5), got {pred.shape}."
        )
    G, _, B, _ = pred.shape
    confidences = pred[..., 4]
    flat = int(np.argmax(confidences))
    row, col, slot = np.unravel_index(flat, confidences.shape)
    offsets = np.clip(pred[row, col, slot, :4], 0.0, 1.0)
    box = cell_box(offsets, int(row), int(col), G)
    return Detection(
        box=box,
        box_px=(
            box[0] * image_width,
            box[1] * image_height,
            box[2] * image_width,
            box[3] * image_height,
        ),
        confidence=float(confidences[row, col, slot]),
        cell=(int(row), int(col)),
        slot=int(slot),
        confidence_map=confidences.max(axis=2),
    )
