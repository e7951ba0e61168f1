"""Synthetic docking station renderer, one Gaussian spot per visible landmark."""
import logging
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dockvision import exceptions
from dockvision.image import ImageBuffer
from dockvision.scene.camera import CameraIntrinsics, Pose
from dockvision.scene.layout import LandmarkLayout
from dockvision.types import BoxType, FloatArray

logger = logging.getLogger(__name__)


class RenderSpec(BaseModel):
    blob_sigma_px: float = Field(
        1.5, gt=0, description="Gaussian spot radius of a light."
    )
    blob_peak: float = Field(0.9, gt=0, le=1, description="Peak intensity of a light.")
    background_level: float = Field(
        0.15, ge=0, le=1, description="Mean background intensity."
    )
    background_noise_sigma: float = Field(
        0.02, ge=0, description="Std of the additive background noise."
    )
    rng_seed: int = Field(7, ge=0, lt=2**64, description="Seed of the noise stream.")
    light_tint: tuple[float, float, float] = Field(
        (0.75, 1.0, 0.9), description="RGB tint of the lights, max component 1."
    )
    background_tint: tuple[float, float, float] = Field(
        (0.2, 0.6, 1.0), description="RGB tint of the water, max component 1."
    )
    channels: int = Field(3, description="1 for gray images, 3 for RGB.")

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    @field_validator('light_tint', 'background_tint')
    @classmethod
    def check_tint(cls, v):
        if min(v) < 0 or abs(max(v) - 1.0) > 1e-12:
            raise ValueError("Tints need nonnegative components with a maximum of 1.")
        return v

    @field_validator('channels')
    @classmethod
    def check_channels(cls, v):
        if v not in (1, 3):
            raise ValueError("Images have either 1 or 3 channels.")
        return v

    @model_validator(mode='after')
    def check_contrast(self) -> 'RenderSpec':
        if not self.background_level + 3 * self.background_noise_sigma < self.blob_peak:
            raise ValueError(
                "Lights must be brighter than the background, ie background_level + "
                "3 * background_noise_sigma < blob_peak."
            )
        return self


@dataclass
class GroundTruth:
    """
    Exact annotation of a rendered sample. `box` is normalized (x, y, w, h) with x/y the
     top left corner. `visible` lists the layout indices of the `centroids`.
    """

    box: BoxType | None
    pose: Pose | None
    centroids: list[tuple[float, float]] = field(default_factory=list)
    visible: list[int] = field(default_factory=list)
    partial: bool = False


def _pixel_grid(height: int, width: int) -> tuple[FloatArray, FloatArray]:
    # Pixel centres sit at integer coordinates, u along columns and v along rows.
    rows, cols = np.mgrid[0:height, 0:width]
    return cols.astype(np.float64), rows.astype(np.float64)


def render_background(
    intr: CameraIntrinsics, spec: RenderSpec, rng: np.random.Generator
) -> FloatArray:
    shape = (intr.image_height, intr.image_width, spec.channels)
    tint = (
        np.asarray(spec.background_tint) if spec.channels == 3 else np.ones(1)
    )
    noise = rng.normal(0.0, spec.background_noise_sigma, size=shape)
    return spec.background_level * tint + noise


def add_blobs(
    data: FloatArray, centres: FloatArray, spec: RenderSpec, peak: float | None = None
) -> FloatArray:
    """Add an isotropic Gaussian spot at every (u, v) centre, in place."""
    height, width = data.shape[:2]
    u, v = _pixel_grid(height, width)
    tint = np.asarray(spec.light_tint) if data.shape[2] == 3 else np.ones(1)
    peak = spec.blob_peak if peak is None else peak
    for cu, cv in np.atleast_2d(centres):
        spot = np.exp(-((u - cu) ** 2 + (v - cv) ** 2) / (2 * spec.blob_sigma_px**2))
        data += peak * spot[:, :, None] * tint
    return data


def box_from_centroids(
    centroids: FloatArray, pad_px: float, intr: CameraIntrinsics
) -> BoxType:
    """Tight bounds of the centroids padded by `pad_px`, clipped and normalized."""
    centroids = np.atleast_2d(centroids)
    u_min = max(0.0, centroids[:, 0].min() - pad_px)
    v_min = max(0.0, centroids[:, 1].min() - pad_px)
    u_max = min(float(intr.image_width), centroids[:, 0].max() + pad_px)
    v_max = min(float(intr.image_height), centroids[:, 1].max() + pad_px)
    return (
        u_min / intr.image_width,
        v_min / intr.image_height,
        (u_max - u_min) / intr.image_width,
        (v_max - v_min) / intr.image_height,
    )


def visible_projections(
    layout: LandmarkLayout, intr: CameraIntrinsics, pose: Pose
) -> tuple[FloatArray, np.ndarray]:
    """Projections of every layout point and the mask of those landing in the image."""
    points_c = pose.transform(layout.points)
    in_front = points_c[:, 2] > 0
    pixels = np.full((layout.count, 2), np.nan)
    homogeneous = points_c[in_front] @ intr.matrix.T
    pixels[in_front] = homogeneous[:, :2] / homogeneous[:, 2:3]
    visible = in_front.copy()
    visible[in_front] = intr.contains(pixels[in_front])
    return pixels, visible


def render_scene(
    layout: LandmarkLayout,
    intr: CameraIntrinsics,
    pose: Pose,
    spec: RenderSpec,
    allow_partial: bool = False,
) -> tuple[ImageBuffer, GroundTruth]:
    """Render the station at `pose`. Partial views raise unless `allow_partial`."""
    pixels, visible = visible_projections(layout, intr, pose)
    if not visible.any():
        raise exceptions.NoLandmarkVisible(
            "No landmark projects inside the image for the requested pose."
        )
    partial = not visible.all()
    if partial and not allow_partial:
        raise exceptions.PartialObservation(
            f"Only {int(visible.sum())} of {layout.count} landmarks project inside the "
            f"image and partial observations were not allowed."
        )

    rng = np.random.default_rng(spec.rng_seed)
    data = render_background(intr, spec, rng)
    centroids = pixels[visible]
    add_blobs(data, centroids, spec)
    data = np.clip(data, 0.0, 1.0)

    truth = GroundTruth(
        box=box_from_centroids(centroids, 2 * spec.blob_sigma_px, intr),
        pose=pose,
        centroids=[(float(u), float(v)) for u, v in centroids],
        visible=[int(i) for i in np.flatnonzero(visible)],
        partial=partial,
    )
    color_space = 'RGB' if spec.channels == 3 else 'GRAY'
    return ImageBuffer(data, color_space), truth


def render_empty(
    intr: CameraIntrinsics,
    spec: RenderSpec,
    distractors: int = 0,
) -> ImageBuffer:
    """Background sample, noise plus `distractors` randomly placed lights."""
    rng = np.random.default_rng(spec.rng_seed)
    data = render_background(intr, spec, rng)
    if distractors > 0:
        centres = np.column_stack(
            [
                rng.uniform(0, intr.image_width - 1, distractors),
                rng.uniform(0, intr.image_height - 1, distractors),
            ]
        )
        add_blobs(data, centres, spec)
    color_space = 'RGB' if spec.channels == 3 else 'GRAY'
    return ImageBuffer(np.clip(data, 0.0, 1.0), color_space)
