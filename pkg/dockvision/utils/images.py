"""Image file IO. PNG, binary PGM (gray) and PPM (rgb), 8 bit."""
import logging
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from dockvision import exceptions
from dockvision.image import ImageBuffer
from dockvision.utils.files import ensure_parent

logger = logging.getLogger(__name__)

FORMATS = {
    'png': 'PNG',
    'pgm': 'PPM',
    'ppm': 'PPM',
}


def to_uint8(image: ImageBuffer) -> np.ndarray:
    rgb_or_gray = image if image.color_space == 'GRAY' else image.to_rgb()
    return np.clip(np.rint(rgb_or_gray.data * 255.0), 0, 255).astype(np.uint8)


def write_image(path: str, image: ImageBuffer):
    extension = path.rsplit('.', 1)[-1].lower()
    if extension not in FORMATS:
        raise exceptions.IoFailure(
            f"Unsupported image extension for {path}. Use one of {list(FORMATS)}."
        )
    pixels = to_uint8(image)
    if image.color_space == 'GRAY':
        pil_image = Image.fromarray(pixels[:, :, 0], mode='L')
    else:
        if extension == 'pgm':
            raise exceptions.IoFailure(f"PGM only stores gray images, got {path}.")
        pil_image = Image.fromarray(pixels, mode='RGB')
    ensure_parent(path)
    try:
        pil_image.save(path, format=FORMATS[extension])
    except OSError as e:
        raise exceptions.IoFailure(f"Unable to write image {path}: {e}") from None


def read_image(path: str) -> ImageBuffer:
    if not os.path.exists(path):
        raise exceptions.IoFailure(f"Can't find the image {path}.")
    try:
        with Image.open(path) as pil_image:
            if pil_image.mode in ('L', 'I', 'I;16', '1'):
                pixels = np.asarray(pil_image.convert('L'), dtype=np.float64)
                return ImageBuffer(pixels[:, :, None] / 255.0, 'GRAY')
            pixels = np.asarray(pil_image.convert('RGB'), dtype=np.float64)
            return ImageBuffer(pixels / 255.0, 'RGB')
    except (UnidentifiedImageError, OSError) as e:
        raise exceptions.IoFailure(f"Unable to read image {path}: {e}") from None
