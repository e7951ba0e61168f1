"""Deformed dataset samples: mirror images above the station and noisy luminaries."""
import logging

import numpy as np

from dockvision import exceptions
from dockvision.deform.composite import CompositeMode, composite_patch
from dockvision.detector.encoding import iou
from dockvision.image import ImageBuffer
from dockvision.types import BoxType

logger = logging.getLogger(__name__)

PLACEMENT_ATTEMPTS = 1000
PLACEMENT_MAX_IOU = 0.1


def box_pixels(box: BoxType, width: int, height: int) -> tuple[int, int, int, int]:
    """Normalized box to integer (top, left, height, width) covering it."""
    x, y, w, h = box
    left = int(np.floor(x * width))
    top = int(np.floor(y * height))
    right = min(width, int(np.ceil((x + w) * width)))
    bottom = min(height, int(np.ceil((y + h) * height)))
    return top, left, max(1, bottom - top), max(1, right - left)


def make_mirror_sample(
    img: ImageBuffer,
    gt_box: BoxType,
    rng: np.random.Generator,
    gap_range: tuple[float, float] = (0.2, 0.6),
    mode: CompositeMode = 'GradientDomain',
) -> tuple[ImageBuffer, BoxType]:
    """
    Composite a vertically flipped copy of the station patch above it, separated by a
     gap drawn from `gap_range` times the box height. The ground truth is unchanged.
    """
    top, left, height, width = box_pixels(gt_box, img.width, img.height)
    gap = int(round(rng.uniform(*gap_range) * height))
    mirror_top = top - gap - height
    if mirror_top < 0:
        raise exceptions.NoRoomAbove(
            f"A mirror of height {height} with gap {gap} needs {height + gap} rows "
            f"above the station, only {top} are free."
        )
    flipped = img.with_data(img.data[top : top + height, left : left + width][::-1])
    return composite_patch(img, flipped, (mirror_top, left), mode=mode), gt_box


def luminary_patch(
    img: ImageBuffer, top: int, left: int, size: int, sigma: float, peak: float
) -> ImageBuffer:
    """The base region under (top, left) with a bright Gaussian spot in its centre."""
    region = img.to_rgb().data if img.color_space == 'HSV' else img.data
    region = region[top : top + size, left : left + size].copy()
    offsets = np.arange(size) - (size - 1) / 2
    spot = np.exp(-(offsets[:, None] ** 2 + offsets[None, :] ** 2) / (2 * sigma**2))
    region += peak * spot[:, :, None]
    space = 'RGB' if img.color_space == 'HSV' else img.color_space
    return ImageBuffer(np.clip(region, 0.0, 1.0), space)


def make_noisy_luminary_sample(
    img: ImageBuffer,
    gt_box: BoxType | None,
    rng: np.random.Generator,
    count: int = 3,
    sigma: float = 1.5,
    peak: float = 0.9,
    mode: CompositeMode = 'GradientDomain',
) -> tuple[ImageBuffer, BoxType | None]:
    """
    Add `count` bright distractors at rejection sampled places overlapping the ground
     truth by IoU < 0.1. The ground truth is unchanged.
    """
    size = min(2 * int(np.ceil(3 * sigma)) + 1, img.height, img.width)
    out = img
    for index in range(count):
        for _ in range(PLACEMENT_ATTEMPTS):
            top = int(rng.integers(0, img.height - size + 1))
            left = int(rng.integers(0, img.width - size + 1))
            placed = (
                left / img.width,
                top / img.height,
                size / img.width,
                size / img.height,
            )
            if gt_box is None or iou(placed, gt_box) < PLACEMENT_MAX_IOU:
                break
        else:
            raise exceptions.PlacementFailed(
                f"No place for distractor {index + 1} of {count} after "
                f"{PLACEMENT_ATTEMPTS} attempts."
            )
        patch = luminary_patch(out, top, left, size, sigma, peak)
        out = composite_patch(out, patch, (top, left), mode=mode)
        logger.debug(f"Distractor {index + 1} at row {top}, column {left}.")
    return out, gt_box
