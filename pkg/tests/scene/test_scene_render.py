import numpy as np
import pytest
from pydantic import ValidationError

from dockvision import exceptions
from dockvision.scene import (
    Pose,
    RenderSpec,
    project_points,
    render_empty,
    render_scene,
)


@pytest.fixture
def spec():
    return RenderSpec()


def test_scene_render_centroids_are_projections(layout, intrinsics, spec):
    pose = Pose.identity(3000.0)
    image, truth = render_scene(layout, intrinsics, pose, spec)
    assert image.shape == (112, 112)
    assert image.color_space == 'RGB'
    assert len(truth.centroids) == 8
    assert not truth.partial
    expected = project_points(layout.points, intrinsics, pose)
    assert np.allclose(truth.centroids, expected, rtol=0, atol=1e-9)


def test_scene_render_blobs_peak_at_centroids(layout, intrinsics):
    spec = RenderSpec(background_noise_sigma=0.0)
    image, truth = render_scene(layout, intrinsics, Pose.identity(3000.0), spec)
    value = image.value()
    for u, v in truth.centroids:
        row, col = int(round(v)), int(round(u))
        assert value[row, col] > spec.background_level + 0.5


def test_scene_render_deterministic(layout, intrinsics, spec):
    pose = Pose.from_euler(10, -5, 2, [100, -50, 4000])
    first, _ = render_scene(layout, intrinsics, pose, spec)
    second, _ = render_scene(layout, intrinsics, pose, spec)
    assert np.array_equal(first.data, second.data)


def test_scene_render_box_contains_centroids(layout, intrinsics, spec):
    _, truth = render_scene(
        layout, intrinsics, Pose.from_euler(20, 15, -30, [-150, 80, 3500]), spec
    )
    x, y, w, h = truth.box
    assert 0 <= x and 0 <= y and x + w <= 1 + 1e-12 and y + h <= 1 + 1e-12
    for u, v in truth.centroids:
        assert x * 112 <= u <= (x + w) * 112
        assert y * 112 <= v <= (y + h) * 112


def test_scene_render_partial_observation(layout, intrinsics, spec):
    # Shift the station 45 px right at 3000 mm, the three rightmost lights leave.
    pose = Pose(np.eye(3), [45 * 3000 / 140, 0.0, 3000.0])
    with pytest.raises(exceptions.PartialObservation):
        render_scene(layout, intrinsics, pose, spec)
    _, truth = render_scene(layout, intrinsics, pose, spec, allow_partial=True)
    assert truth.partial
    assert len(truth.centroids) == 5
    assert truth.visible == [2, 3, 4, 5, 6]


def test_scene_render_no_landmark_visible(layout, intrinsics, spec):
    with pytest.raises(exceptions.NoLandmarkVisible):
        render_scene(layout, intrinsics, Pose(np.eye(3), [1e5, 0.0, 3000.0]), spec)


def test_scene_render_gray(layout, intrinsics):
    image, _ = render_scene(
        layout, intrinsics, Pose.identity(3000.0), RenderSpec(channels=1)
    )
    assert image.color_space == 'GRAY'


def test_scene_render_empty_with_distractors(intrinsics):
    spec = RenderSpec(background_noise_sigma=0.0)
    plain = render_empty(intrinsics, spec)
    busy = render_empty(intrinsics, spec, distractors=3)
    assert plain.value().max() == pytest.approx(spec.background_level)
    assert busy.value().max() > spec.background_level + 0.3


@pytest.mark.parametrize(
    'fields',
    [
        {'blob_peak': 0.2, 'background_level': 0.15, 'background_noise_sigma': 0.02},
        {'light_tint': (0.5, 0.5, 0.5)},
        {'channels': 2},
        {'blob_peak': 1.5},
    ],
)
def test_scene_render_invalid_spec(fields):
    with pytest.raises(ValidationError):
        RenderSpec(**fields)
