import numpy as np
import pytest

from dockvision import exceptions
from dockvision.evaluation import trial_error
from dockvision.image import ImageBuffer
from dockvision.landmarks import (
    LandmarkSettings,
    crop_box,
    estimate_pose_from_patch,
    extract_landmarks,
)
from dockvision.scene import CameraIntrinsics, Pose
from dockvision.scene.dataset import POSE_RANGE_PRESETS, sample_pose
from dockvision.scene.render import RenderSpec, render_scene

RENDERED = LandmarkSettings(preset='rendered')


@pytest.fixture
def camera():
    return CameraIntrinsics(
        k_x=400.0, k_y=400.0, u_0=160.0, v_0=120.0, image_width=320, image_height=240
    )


def _rms_to_truth(found, truth):
    errors = [np.min(np.sum((found - point) ** 2, axis=1)) for point in truth]
    return float(np.sqrt(np.mean(errors)))


def _limit_spec(seed):
    """Widest spots and strongest background noise the pipeline is rated for."""
    return RenderSpec(blob_sigma_px=3.0, background_noise_sigma=0.05, rng_seed=seed)


def test_landmarks_pipeline_full_scenes(layout, camera, rng):
    pose_range = POSE_RANGE_PRESETS['ground']
    found, truth = [], []
    for index in range(200):
        pose = sample_pose(pose_range, camera, layout, rng)
        image, gt = render_scene(layout, camera, pose, _limit_spec(index))
        landmarks = extract_landmarks(image, RENDERED)
        assert landmarks.observation == 'Full'
        found.append(landmarks.as_array())
        truth.append(np.array(gt.centroids))
    squared = [_rms_to_truth(a, b) ** 2 for a, b in zip(found, truth)]
    assert np.sqrt(np.mean(squared)) <= 0.5


def test_landmarks_pipeline_partial_scenes(layout, camera, rng):
    pose_range = POSE_RANGE_PRESETS['ground']
    for index in range(200):
        pose = sample_pose(pose_range, camera, layout, rng, full=False)
        image, gt = render_scene(
            layout, camera, pose, _limit_spec(index), allow_partial=True
        )
        assert gt.partial
        assert extract_landmarks(image, RENDERED).observation == 'Partial'


def test_landmarks_pipeline_bradley_preset():
    assert LandmarkSettings().t_percent == 15.0
    assert LandmarkSettings().smooth_sigma == 0.0
    assert (RENDERED.t_percent, RENDERED.smooth_sigma) == (50.0, 1.0)
    tuned = LandmarkSettings(preset='rendered', t_percent=40.0)
    assert (tuned.t_percent, tuned.smooth_sigma) == (40.0, 1.0)


def test_landmarks_pipeline_pose_from_detected_box(layout):
    camera = CameraIntrinsics(
        k_x=800.0, k_y=800.0, u_0=320.0, v_0=240.0, image_width=640, image_height=480
    )
    truth = Pose.from_euler(10.0, -5.0, 2.0, [100.0, -50.0, 4000.0])
    image, gt = render_scene(layout, camera, truth, RenderSpec())
    estimate = estimate_pose_from_patch(image, gt.box, layout, camera, RENDERED)
    error = trial_error(estimate.solution.pose, truth)
    assert estimate.landmarks.is_full
    assert error.orientation_deg <= 3.0
    assert error.relative_position <= 0.02
    assert set(estimate.timings) == {'landmarks', 'pose'}
    assert estimate.solution.ordering is not None


def test_landmarks_pipeline_rendered_ring_keeps_true_twist(layout, camera, rng):
    errors = []
    for index in range(30):
        truth = sample_pose(POSE_RANGE_PRESETS['docking'], camera, layout, rng)
        image, gt = render_scene(layout, camera, truth, _limit_spec(index))
        estimate = estimate_pose_from_patch(image, gt.box, layout, camera, RENDERED)
        errors.append(trial_error(estimate.solution.pose, truth).orientation_deg)
    # A wrong cyclic assignment costs a multiple of 45 deg.
    assert max(errors) < 20.0
    assert np.mean(errors) <= 3.0


def test_landmarks_pipeline_partial_patch_has_no_pose(layout):
    camera = CameraIntrinsics(
        k_x=800.0, k_y=800.0, u_0=320.0, v_0=240.0, image_width=640, image_height=480
    )
    truth = Pose.from_euler(0.0, 0.0, 0.0, [0.0, 0.0, 4000.0])
    image, _ = render_scene(layout, camera, truth, RenderSpec())
    # Only the right half of the ring.
    with pytest.raises(exceptions.PartialObservation):
        estimate_pose_from_patch(
            image, (0.5, 0.3, 0.3, 0.4), layout, camera, LandmarkSettings(crop_margin=0)
        )


def test_landmarks_pipeline_crop_box():
    image = ImageBuffer(np.zeros((100, 200)), 'GRAY')
    patch, left, top = crop_box(image, (0.25, 0.5, 0.25, 0.25), margin=0.0)
    assert (left, top) == (50, 50)
    assert patch.shape == (25, 50)
    patch, left, top = crop_box(image, (0.0, 0.75, 0.5, 0.25), margin=0.5)
    assert (left, top) == (0, 62)
    assert patch.shape == (38, 150)
    with pytest.raises(exceptions.EmptyPatch):
        crop_box(image, (0.5, 0.5, 0.0, 0.0), margin=0.0)
