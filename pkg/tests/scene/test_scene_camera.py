import numpy as np
import pytest
from pydantic import ValidationError

from dockvision import exceptions
from dockvision.scene import (
    CameraIntrinsics,
    LandmarkLayout,
    Pose,
    project,
    project_points,
)


@pytest.fixture
def vga():
    return CameraIntrinsics(
        k_x=800, k_y=800, u_0=320, v_0=240, image_width=640, image_height=480
    )


def test_scene_camera_optical_axis_hits_principal_point(vga):
    assert project((0, 0, 0), vga, Pose.identity(3000.0)) == (320.0, 240.0)


def test_scene_camera_project_offset_point(vga):
    u, v = project((600, 0, 0), vga, Pose.identity(3000.0))
    assert u == pytest.approx(480.0, abs=1e-12)
    assert v == pytest.approx(240.0, abs=1e-12)


def test_scene_camera_point_behind_camera(vga):
    with pytest.raises(exceptions.PointBehindCamera):
        project((0, 0, -3000), vga, Pose.identity(0.0))


def test_scene_camera_normalize_inverts_projection(vga, rng):
    pose = Pose.from_euler(10, -5, 2, [100, -50, 4000])
    points = rng.uniform(-500, 500, (10, 3))
    pixels = project_points(points, vga, pose)
    rays = vga.normalize(pixels)
    points_c = pose.transform(points)
    assert np.allclose(rays[:, :2], points_c[:, :2] / points_c[:, 2:3])


@pytest.mark.parametrize(
    'fields',
    [{'k_x': 0.0}, {'u_0': 112.0}, {'v_0': -1.0}, {'image_width': 0}, {'extra': 1}],
)
def test_scene_camera_invalid_intrinsics(fields):
    with pytest.raises(ValidationError):
        CameraIntrinsics(**fields)


def test_scene_camera_pose_validates_rotation():
    with pytest.raises(exceptions.DegenerateGeometry):
        Pose(np.diag([1.0, 1.0, -1.0]), np.zeros(3))
    with pytest.raises(exceptions.NonFiniteInput):
        Pose(np.eye(3), [0.0, np.inf, 1.0])


def test_scene_camera_pose_dict_round_trip():
    pose = Pose.from_euler(12.0, -7.0, 3.0, [10.0, 20.0, 3000.0])
    again = Pose.from_dict(pose.to_dict())
    assert np.array_equal(again.rotation, pose.rotation)
    assert np.array_equal(again.translation, pose.translation)
    assert pose.yaw == pytest.approx(12.0)
    assert pose.pitch == pytest.approx(-7.0)
    assert pose.roll == pytest.approx(3.0)


def test_scene_camera_layout_on_circle():
    layout = LandmarkLayout()
    points = layout.points
    assert points.shape == (8, 3)
    assert np.allclose(np.linalg.norm(points[:, :2], axis=1), 600.0)
    assert np.allclose(points[:, 2], 0.0)
    steps = np.diff(np.unwrap(np.arctan2(points[:, 1], points[:, 0])))
    assert np.allclose(steps, 2 * np.pi / 8)
