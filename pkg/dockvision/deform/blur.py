import numpy as np
from scipy import ndimage

from dockvision import exceptions
from dockvision.image import ImageBuffer
from dockvision.types import FloatArray


def kernel_side(sigma: float) -> int:
    return 2 * int(np.ceil(2 * sigma)) + 1


def gaussian_kernel(sigma: float) -> FloatArray:
    """Normalized isotropic Gaussian of side 2 * ceil(2 sigma) + 1."""
    if not sigma > 0:
        raise exceptions.NonPositiveSigma(f"Blur needs sigma > 0, got {sigma}.")
    half = kernel_side(sigma) // 2
    offsets = np.arange(-half, half + 1, dtype=np.float64)
    xx, yy = np.meshgrid(offsets, offsets)
    kernel = np.exp(-(xx**2 + yy**2) / (2 * sigma**2))
    return kernel / kernel.sum()


def gaussian_blur(img: ImageBuffer, sigma: float) -> ImageBuffer:
    """Per channel blur with clamped edges, done on RGB data for HSV images."""
    kernel = gaussian_kernel(sigma)
    half = kernel.shape[0] // 2
    if kernel[half, half] == 1.0:
        # Off centre weights underflowed, a 1x1 kernel.
        return img.with_data(img.data.copy())
    source = img.to_rgb() if img.color_space == 'HSV' else img
    blurred = np.stack(
        [
            ndimage.correlate(source.data[:, :, c], kernel, mode='nearest')
            for c in range(source.channels)
        ],
        axis=2,
    )
    return ImageBuffer(np.clip(blurred, 0.0, 1.0), source.color_space).to_color_space(
        img.color_space
    )
