from dockvision.scene.camera import CameraIntrinsics, Pose, project, project_points
from dockvision.scene.dataset import (
    POSE_RANGE_PRESETS,
    MANIFEST_NAME,
    DatasetManifest,
    ManifestRecord,
    PoseRange,
    generate_dataset,
    manifest_checksum,
    read_manifest,
    sample_pose,
    write_manifest,
)
from dockvision.scene.layout import LandmarkLayout
from dockvision.scene.render import GroundTruth, RenderSpec, render_empty, render_scene

__all__ = [
    'CameraIntrinsics',
    'DatasetManifest',
    'GroundTruth',
    'LandmarkLayout',
    'MANIFEST_NAME',
    'ManifestRecord',
    'POSE_RANGE_PRESETS',
    'Pose',
    'PoseRange',
    'RenderSpec',
    'generate_dataset',
    'manifest_checksum',
    'project',
    'project_points',
    'read_manifest',
    'render_empty',
    'render_scene',
    'sample_pose',
    'write_manifest',
]
