from dockvision.landmarks.components import (
    Component,
    ComponentSet,
    connected_components,
)
from dockvision.landmarks.consolidate import LandmarkSet, consolidate_landmarks
from dockvision.landmarks.kmeans import weighted_kmeans
from dockvision.landmarks.ordering import order_landmarks
from dockvision.landmarks.pipeline import (
    LANDMARK_PRESETS,
    LandmarkSettings,
    PoseEstimate,
    crop_box,
    estimate_pose_from_patch,
    extract_landmarks,
)
from dockvision.landmarks.threshold import BinaryMask, adaptive_threshold

__all__ = [
    'LANDMARK_PRESETS',
    'BinaryMask',
    'Component',
    'ComponentSet',
    'LandmarkSet',
    'LandmarkSettings',
    'PoseEstimate',
    'adaptive_threshold',
    'connected_components',
    'consolidate_landmarks',
    'crop_box',
    'estimate_pose_from_patch',
    'extract_landmarks',
    'order_landmarks',
    'weighted_kmeans',
]
