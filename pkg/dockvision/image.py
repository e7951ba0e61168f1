"""
The planar raster type shared by the scene renderer, the deformation suite, the
landmark extractor and the detector.
"""
from dataclasses import dataclass

import numpy as np
from matplotlib.colors import hsv_to_rgb, rgb_to_hsv

from dockvision import exceptions
from dockvision.types import ColorSpace, FloatArray

CHANNELS = {'GRAY': 1, 'RGB': 3, 'HSV': 3}


@dataclass(frozen=True)
class ImageBuffer:
    """
    Image stored as float64 samples in [0, 1] with shape (height, width, channels) and
     a color space tag. HSV hue is stored in [0, 1) and wraps.
    """

    data: FloatArray
    color_space: ColorSpace = 'RGB'

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[2] != CHANNELS[self.color_space]:
            raise exceptions.ShapeMismatch(
                f"A {self.color_space} image needs shape (h, w, "
                f"{CHANNELS[self.color_space]}), got {np.shape(self.data)}."
            )
        if not np.all(np.isfinite(data)):
            raise exceptions.NonFiniteInput("Image samples must be finite.")
        object.__setattr__(self, 'data', data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def with_data(self, data: FloatArray) -> 'ImageBuffer':
        """Same color space, new samples."""
        return ImageBuffer(data=data, color_space=self.color_space)

    def to_rgb(self) -> 'ImageBuffer':
        if self.color_space == 'RGB':
            return self
        if self.color_space == 'GRAY':
            return ImageBuffer(np.repeat(self.data, 3, axis=2), 'RGB')
        hsv = self.data.copy()
        hsv[..., 0] = np.mod(hsv[..., 0], 1.0)
        return ImageBuffer(np.clip(hsv_to_rgb(hsv), 0.0, 1.0), 'RGB')

    def to_hsv(self) -> 'ImageBuffer':
        if self.color_space == 'HSV':
            return self
        rgb = np.clip(self.to_rgb().data, 0.0, 1.0)
        return ImageBuffer(rgb_to_hsv(rgb), 'HSV')

    def to_gray(self) -> 'ImageBuffer':
        """Gray as the HSV value channel, exact for images with R = G = B."""
        if self.color_space == 'GRAY':
            return self
        return ImageBuffer(self.value()[:, :, None], 'GRAY')

    def to_color_space(self, color_space: ColorSpace) -> 'ImageBuffer':
        if color_space == 'RGB':
            return self.to_rgb()
        if color_space == 'HSV':
            return self.to_hsv()
        return self.to_gray()

    def value(self) -> FloatArray:
        """The HSV value channel (max over RGB) as a 2D array."""
        if self.color_space == 'GRAY':
            return self.data[:, :, 0]
        if self.color_space == 'HSV':
            return self.data[:, :, 2]
        return self.data.max(axis=2)

    def crop(self, top: int, left: int, height: int, width: int) -> 'ImageBuffer':
        return self.with_data(self.data[top : top + height, left : left + width].copy())
