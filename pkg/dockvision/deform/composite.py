"""Pasting patches into images, gradient domain (Poisson) or feathered alpha."""
import logging
from typing import Literal

import numpy as np
from scipy import sparse
from scipy.sparse import linalg

from dockvision import exceptions
from dockvision.image import ImageBuffer
from dockvision.types import FloatArray

logger = logging.getLogger(__name__)

CompositeMode = Literal['GradientDomain', 'Alpha']
Solver = Literal['auto', 'cg', 'direct']

DIRECT_MAX_SIDE = 32
CG_RTOL = 1e-10
FEATHER_RADIUS = 3


def poisson_matrix(height: int, width: int) -> sparse.csr_matrix:
    """5 point Laplacian (4 on the diagonal) over a height x width interior."""

    def second_difference(size):
        return sparse.diags(
            [-np.ones(size - 1), 2 * np.ones(size), -np.ones(size - 1)], [-1, 0, 1]
        )

    return (
        sparse.kron(sparse.identity(height), second_difference(width))
        + sparse.kron(second_difference(height), sparse.identity(width))
    ).tocsr()


def poisson_rhs(guidance: FloatArray, boundary: FloatArray) -> FloatArray:
    """
    Right hand side on the interior of a region. `guidance` supplies the Laplacian of
     the patch, `boundary` the fixed values on the one pixel border ring.
    """
    g = guidance
    laplacian = (
        4 * g[1:-1, 1:-1] - g[:-2, 1:-1] - g[2:, 1:-1] - g[1:-1, :-2] - g[1:-1, 2:]
    )
    rhs = laplacian.copy()
    rhs[0, :] += boundary[0, 1:-1]
    rhs[-1, :] += boundary[-1, 1:-1]
    rhs[:, 0] += boundary[1:-1, 0]
    rhs[:, -1] += boundary[1:-1, -1]
    return rhs


def solve_poisson(
    guidance: FloatArray, boundary: FloatArray, solver: Solver = 'auto'
) -> FloatArray:
    """Interior solution of one channel, shape (h - 2, w - 2)."""
    height, width = guidance.shape[0] - 2, guidance.shape[1] - 2
    matrix = poisson_matrix(height, width)
    rhs = poisson_rhs(guidance, boundary).ravel()
    if solver == 'auto':
        solver = 'direct' if max(guidance.shape) <= DIRECT_MAX_SIDE else 'cg'
    if solver == 'direct':
        solution = np.linalg.solve(matrix.toarray(), rhs)
    else:
        start = boundary[1:-1, 1:-1].ravel()
        solution, info = linalg.cg(matrix, rhs, x0=start, rtol=CG_RTOL, atol=0.0)
        if info != 0:
            logger.warning(f"Conjugate gradient stopped early, info={info}.")
    return solution.reshape(height, width)


def feather_mask(height: int, width: int, radius: int = FEATHER_RADIUS) -> FloatArray:
    """0 on the patch border rising linearly to 1 at `radius` pixels inside."""
    rows = np.arange(height)[:, None]
    cols = np.arange(width)[None, :]
    distance = np.minimum(
        np.minimum(rows, height - 1 - rows), np.minimum(cols, width - 1 - cols)
    )
    return np.clip(distance / radius, 0.0, 1.0)


def composite_patch(
    base: ImageBuffer,
    patch: ImageBuffer,
    location: tuple[int, int],
    mode: CompositeMode = 'GradientDomain',
    solver: Solver = 'auto',
) -> ImageBuffer:
    """
    Paste `patch` with its top left corner at `location` = (top, left). GradientDomain
     keeps the patch gradients inside and the base values on the patch border, Alpha
     blends with a feathered mask.
    """
    top, left = location
    height, width = patch.shape
    if top < 0 or left < 0 or top + height > base.height or left + width > base.width:
        raise exceptions.PatchOutOfBounds(
            f"A {height}x{width} patch at {location} does not fit the "
            f"{base.height}x{base.width} image."
        )
    source = patch.to_color_space(
        'RGB' if base.color_space == 'HSV' else base.color_space
    )
    target = base.to_rgb() if base.color_space == 'HSV' else base
    data = target.data.copy()
    region = data[top : top + height, left : left + width]

    if mode == 'Alpha':
        alpha = feather_mask(height, width)[:, :, None]
        region[...] = alpha * source.data + (1 - alpha) * region
    elif height > 2 and width > 2:
        for c in range(data.shape[2]):
            region[1:-1, 1:-1, c] = solve_poisson(
                source.data[:, :, c], region[:, :, c], solver
            )
    return ImageBuffer(np.clip(data, 0.0, 1.0), target.color_space).to_color_space(
        base.color_space
    )
