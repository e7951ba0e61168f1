"""Detected patch to landmark centroids to pose."""
import logging
from dataclasses import dataclass, field
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dockvision import exceptions
from dockvision.image import ImageBuffer
from dockvision.landmarks.components import connected_components
from dockvision.landmarks.consolidate import LandmarkSet, consolidate_landmarks
from dockvision.landmarks.ordering import order_landmarks
from dockvision.landmarks.threshold import adaptive_threshold
from dockvision.pnp.solver import PnpSolution, solve_with_orderings
from dockvision.scene.camera import CameraIntrinsics
from dockvision.scene.layout import LandmarkLayout
from dockvision.types import BoxType
from dockvision.utils.log import log_stage

logger = logging.getLogger(__name__)


# Threshold defaults per preset. `bradley` is the plain method, `rendered` suits
# synthetic spots over additive background noise up to 0.05.
LANDMARK_PRESETS = {
    'bradley': {'t_percent': 15.0, 'smooth_sigma': 0.0},
    'rendered': {'t_percent': 50.0, 'smooth_sigma': 1.0},
}


class LandmarkSettings(BaseModel):
    """Fields left unset take the values of `preset`."""

    preset: Literal['bradley', 'rendered'] = Field(
        'bradley', description="Threshold defaults, see LANDMARK_PRESETS."
    )
    window_frac: float = Field(
        0.125, gt=0, le=1, description="Threshold window as a fraction of the patch."
    )
    t_percent: float = Field(
        15.0, ge=0, description="Percent a pixel must exceed its local mean by."
    )
    smooth_sigma: float = Field(
        0.0, ge=0, description="Gaussian pre-filter sigma in px, 0 disables it."
    )
    min_area: int = Field(3, ge=1, description="Smallest component kept, in px.")
    k: int = Field(8, ge=4, description="Number of landmarks on the station.")
    seed: int = Field(0, ge=0, description="k-means seed.")
    max_iter: int = Field(50, gt=0, description="k-means iteration cap.")
    crop_margin: float = Field(
        0.25, ge=0, description="Margin added around a detected box before cropping."
    )

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    @model_validator(mode='before')
    @classmethod
    def apply_preset(cls, data):
        if isinstance(data, dict) and data.get('preset') in LANDMARK_PRESETS:
            return {**LANDMARK_PRESETS[data['preset']], **data}
        return data


def extract_landmarks(
    patch: ImageBuffer, settings: LandmarkSettings | None = None
) -> LandmarkSet:
    """Segmentation, component labeling and consolidation on one patch."""
    settings = settings or LandmarkSettings()
    mask = adaptive_threshold(
        patch,
        window_frac=settings.window_frac,
        t_percent=settings.t_percent,
        smooth_sigma=settings.smooth_sigma,
    )
    components = connected_components(mask, min_area=settings.min_area)
    return consolidate_landmarks(
        components, k=settings.k, seed=settings.seed, max_iter=settings.max_iter
    )


def crop_box(
    image: ImageBuffer, box: BoxType, margin: float
) -> tuple[ImageBuffer, int, int]:
    """Crop a normalized box grown by `margin` of its size on every side."""
    x, y, w, h = box
    left = int(max(0.0, (x - margin * w) * image.width))
    top = int(max(0.0, (y - margin * h) * image.height))
    right = int(min(float(image.width), (x + w + margin * w) * image.width + 0.999999))
    bottom = int(
        min(float(image.height), (y + h + margin * h) * image.height + 0.999999)
    )
    if right <= left or bottom <= top:
        raise exceptions.EmptyPatch(f"The box {box} covers no pixels.")
    return image.crop(top, left, bottom - top, right - left), left, top


@dataclass
class PoseEstimate:
    solution: PnpSolution
    landmarks: LandmarkSet
    timings: dict[str, float] = field(default_factory=dict)


def estimate_pose_from_patch(
    image: ImageBuffer,
    box: BoxType,
    layout: LandmarkLayout,
    intr: CameraIntrinsics,
    settings: LandmarkSettings | None = None,
) -> PoseEstimate:
    """Landmarks inside `box` (image coordinates) and the pose they imply."""
    settings = settings or LandmarkSettings(k=layout.count)
    timings = {}

    with log_stage(timings, 'landmarks', logger):
        patch, left, top = crop_box(image, box, settings.crop_margin)
        landmarks = extract_landmarks(patch, settings).shifted(left, top)
    if not landmarks.is_full:
        raise exceptions.PartialObservation(
            f"Found {len(landmarks.centroids)} of {layout.count} landmarks, pose "
            f"estimation needs a full observation."
        )

    with log_stage(timings, 'pose', logger):
        solution = solve_with_orderings(order_landmarks(landmarks), layout.points, intr)
    return PoseEstimate(solution=solution, landmarks=landmarks, timings=timings)
