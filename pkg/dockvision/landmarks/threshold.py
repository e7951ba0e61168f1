"""Bradley style adaptive thresholding over an integral image."""
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from dockvision import exceptions
from dockvision.image import ImageBuffer


@dataclass(frozen=True)
class BinaryMask:
    """Row major boolean raster, True marks foreground."""

    bits: np.ndarray

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]


def window_size(height: int, width: int, window_frac: float) -> int:
    return max(3, int(round(max(height, width) * window_frac)))


def local_mean(values: np.ndarray, window: int) -> np.ndarray:
    """Mean over a window x window neighbourhood clamped to the raster."""
    height, width = values.shape
    integral = np.zeros((height + 1, width + 1))
    integral[1:, 1:] = values.cumsum(axis=0).cumsum(axis=1)

    half = window // 2
    rows = np.arange(height)
    cols = np.arange(width)
    top = np.clip(rows - half, 0, height)[:, None]
    bottom = np.clip(rows + half + 1, 0, height)[:, None]
    left = np.clip(cols - half, 0, width)[None, :]
    right = np.clip(cols + half + 1, 0, width)[None, :]

    total = (
        integral[bottom, right]
        - integral[top, right]
        - integral[bottom, left]
        + integral[top, left]
    )
    return total / ((bottom - top) * (right - left))


def adaptive_threshold(
    patch: ImageBuffer,
    window_frac: float = 1 / 8,
    t_percent: float = 15.0,
    smooth_sigma: float = 0.0,
) -> BinaryMask:
    """
    A pixel is foreground when it is brighter than its local mean by more than
     `t_percent` percent. Colour patches are segmented on their value channel and
     `smooth_sigma` > 0 applies a Gaussian pre-filter.
    """
    if patch.height == 0 or patch.width == 0:
        raise exceptions.EmptyPatch("Can not threshold a patch without pixels.")
    values = patch.value()
    if smooth_sigma > 0:
        values = ndimage.gaussian_filter(values, smooth_sigma, mode='nearest')
    window = window_size(patch.height, patch.width, window_frac)
    mean = local_mean(values, window)
    return BinaryMask(values > mean * (1.0 + t_percent / 100.0))
