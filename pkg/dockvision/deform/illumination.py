"""
Non-uniform illumination as a low order bivariate polynomial multiplier on the value
channel. Coordinates are normalized to [0, 1] and the coefficient of x^i y^j sits at
index i * (n + 1) + j.
"""
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dockvision import exceptions
from dockvision.image import ImageBuffer
from dockvision.types import FloatArray

logger = logging.getLogger(__name__)

FIELD_RANGE = (0.0, 2.0)


def _coordinates(length: int) -> FloatArray:
    if length == 1:
        return np.zeros(1)
    return np.arange(length, dtype=np.float64) / (length - 1)


def design_matrix(height: int, width: int, m: int = 2, n: int = 2) -> FloatArray:
    """One row per pixel (row major), one column per monomial x^i y^j."""
    x = np.tile(_coordinates(width), height)
    y = np.repeat(_coordinates(height), width)
    return np.column_stack([x**i * y**j for i in range(m + 1) for j in range(n + 1)])


def evaluate_polynomial(
    coeffs: FloatArray, shape: tuple[int, int], m: int = 2, n: int = 2
) -> FloatArray:
    height, width = shape
    design = design_matrix(height, width, m, n)
    return (design @ np.asarray(coeffs)).reshape(height, width)


def fit_illumination(
    value_channel: FloatArray, m: int = 2, n: int = 2
) -> FloatArray:
    """Least squares coefficients Q of f(x, y; Q) against the value channel."""
    values = np.asarray(value_channel, dtype=np.float64)
    if values.ndim == 3:
        values = values[:, :, 0]
    if values.size == 0:
        raise exceptions.EmptyPatch("Can not fit illumination to an empty image.")
    design = design_matrix(values.shape[0], values.shape[1], m, n)
    coeffs, _, rank, _ = np.linalg.lstsq(design, values.ravel(), rcond=None)
    if rank < design.shape[1]:
        raise exceptions.SingularFit(
            f"A {values.shape[0]}x{values.shape[1]} image can not determine "
            f"{design.shape[1]} coefficients (rank {rank})."
        )
    return coeffs


def fit_residual(value_channel: FloatArray, m: int = 2, n: int = 2) -> float:
    """Sum of squared residuals of the fit."""
    values = np.asarray(value_channel, dtype=np.float64)
    coeffs = fit_illumination(values, m, n)
    fitted = evaluate_polynomial(coeffs, values.shape, m, n)
    return float(np.sum((fitted - values) ** 2))


class IlluminationModel(BaseModel):
    """Independent Gaussian per polynomial coefficient."""

    m: int = Field(2, ge=0)
    n: int = Field(2, ge=0)
    mean: list[float]
    var: list[float]

    model_config = ConfigDict(extra='forbid')

    @model_validator(mode='after')
    def check_lengths(self) -> 'IlluminationModel':
        count = (self.m + 1) * (self.n + 1)
        if len(self.mean) != count or len(self.var) != count:
            raise ValueError(
                f"An order ({self.m}, {self.n}) model needs {count} distributions."
            )
        if min(self.var) < 0:
            raise ValueError("Variances must be nonnegative.")
        return self

    @property
    def std(self) -> FloatArray:
        return np.sqrt(np.asarray(self.var))

    def sample(self, rng: np.random.Generator) -> FloatArray:
        return rng.normal(np.asarray(self.mean), self.std)

    @classmethod
    def constant(cls, level: float, m: int = 2, n: int = 2) -> 'IlluminationModel':
        count = (m + 1) * (n + 1)
        return cls(m=m, n=n, mean=[level] + [0.0] * (count - 1), var=[0.0] * count)


def build_illumination_model(
    corpus: list[FloatArray], m: int = 2, n: int = 2
) -> IlluminationModel:
    """Per coefficient sample mean and unbiased variance over the corpus fits."""
    if len(corpus) < 2:
        raise exceptions.CorpusTooSmall(
            f"Fitting coefficient distributions needs at least 2 images, got "
            f"{len(corpus)}."
        )
    fits = np.array([fit_illumination(i, m, n) for i in corpus])
    return IlluminationModel(
        m=m,
        n=n,
        mean=[float(i) for i in fits.mean(axis=0)],
        var=[float(i) for i in fits.var(axis=0, ddof=1)],
    )


def synthesize_illumination_corpus(
    model: IlluminationModel,
    count: int,
    shape: tuple[int, int],
    seed: int = 0,
    noise_sigma: float = 0.0,
) -> list[FloatArray]:
    """Luminosity fields drawn from `model`, optionally with additive pixel noise."""
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(count):
        field = evaluate_polynomial(model.sample(rng), shape, model.m, model.n)
        if noise_sigma > 0:
            field = field + rng.normal(0.0, noise_sigma, shape)
        corpus.append(field)
    return corpus


def apply_illumination(
    img: ImageBuffer, model: IlluminationModel, seed: int | np.random.Generator = 0
) -> ImageBuffer:
    """Multiply the value channel by a field drawn from `model`, clamped to [0, 2]."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    field = evaluate_polynomial(model.sample(rng), img.shape, model.m, model.n)
    field = np.clip(field, *FIELD_RANGE)
    if img.color_space == 'GRAY':
        return img.with_data(np.clip(img.data * field[:, :, None], 0.0, 1.0))
    hsv = img.to_hsv().data.copy()
    hsv[..., 2] = np.clip(hsv[..., 2] * field, 0.0, 1.0)
    return ImageBuffer(hsv, 'HSV').to_color_space(img.color_space)
