"""Colour channel shifts, gamma contrast and the estimators of their parameters."""
from typing import Literal

import numpy as np

from dockvision import exceptions
from dockvision.image import ImageBuffer

HsvChannel = Literal['H', 'S', 'V']
CHANNEL_INDEX = {'H': 0, 'S': 1, 'V': 2}
RATIO_FLOOR = 1e-6
LOG_GUARD = 1e-6


def hsv_shift(img: ImageBuffer, p: HsvChannel, lambda_p: float) -> ImageBuffer:
    """
    Multiply one HSV channel by `lambda_p`. Hue wraps modulo 1, saturation and value
     are clamped to [0, 1]. The result keeps the colour space of `img`.
    """
    if not lambda_p > 0:
        raise exceptions.PreconditionViolation(f"lambda_p must be > 0, got {lambda_p}.")
    hsv = img.to_hsv().data.copy()
    index = CHANNEL_INDEX[p]
    hsv[..., index] *= lambda_p
    if p == 'H':
        hsv[..., 0] = np.mod(hsv[..., 0], 1.0)
    else:
        hsv[..., index] = np.clip(hsv[..., index], 0.0, 1.0)
    return ImageBuffer(hsv, 'HSV').to_color_space(img.color_space)


def _check_pair(img_a: ImageBuffer, img_b: ImageBuffer):
    if img_a.shape != img_b.shape:
        raise exceptions.ShapeMismatch(
            f"Images differ in size, {img_a.shape} and {img_b.shape}."
        )


def estimate_lambda(img_a: ImageBuffer, img_b: ImageBuffer, p: HsvChannel) -> float:
    """
    Mean ratio of channel `p` of `img_b` over `img_a`, computed on the single shifted
     HSV channel. Pixels whose `img_a` value is below 1e-6 are excluded.
    """
    _check_pair(img_a, img_b)
    index = CHANNEL_INDEX[p]
    channel_in = img_a.to_hsv().data[..., index]
    channel_out = img_b.to_hsv().data[..., index]
    kept = channel_in >= RATIO_FLOOR
    if not kept.any():
        raise exceptions.AllPixelsExcluded(
            f"Every pixel of channel {p} is below {RATIO_FLOOR}."
        )
    return float(np.mean(channel_out[kept] / channel_in[kept]))


def _samples(img: ImageBuffer) -> np.ndarray:
    return img.to_rgb().data if img.color_space == 'HSV' else img.data


def gamma_contrast(img: ImageBuffer, gamma: float) -> ImageBuffer:
    """Power law I^gamma on every RGB (or gray) sample."""
    if not gamma > 0:
        raise exceptions.PreconditionViolation(f"gamma must be > 0, got {gamma}.")
    data = np.power(np.clip(_samples(img), 0.0, 1.0), gamma)
    space = 'RGB' if img.color_space == 'HSV' else img.color_space
    return ImageBuffer(data, space).to_color_space(img.color_space)


def estimate_gamma(img_a: ImageBuffer, img_b: ImageBuffer) -> float:
    """
    Mean of log(out) / log(in) over samples, excluding inputs within 1e-6 of 0 or 1
     and zero outputs.
    """
    _check_pair(img_a, img_b)
    data_in = _samples(img_a)
    data_out = _samples(img_b)
    kept = (data_in > LOG_GUARD) & (data_in < 1 - LOG_GUARD) & (data_out > 0)
    if not kept.any():
        raise exceptions.AllPixelsExcluded(
            "Every sample is 0 or 1, where the log ratio is undefined."
        )
    return float(np.mean(np.log(data_out[kept]) / np.log(data_in[kept])))
