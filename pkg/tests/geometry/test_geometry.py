import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from dockvision import exceptions
from dockvision.geometry import (
    euler_from_rotation,
    is_rotation,
    rotation_angle_deg,
    rotation_from_euler,
)


def test_geometry_yaw_is_rotation_about_z():
    rotation = rotation_from_euler(90.0, 0.0, 0.0)
    assert np.allclose(rotation @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])


def test_geometry_euler_round_trip(rng):
    for yaw, pitch, roll in rng.uniform([-180, -88, -180], [180, 88, 180], (50, 3)):
        rotation = rotation_from_euler(yaw, pitch, roll)
        assert is_rotation(rotation)
        again = rotation_from_euler(*euler_from_rotation(rotation))
        assert np.allclose(again, rotation, rtol=0, atol=1e-9)


@pytest.mark.parametrize('pitch', [90.0, -90.0, 89.995])
def test_geometry_gimbal_lock(pitch):
    with pytest.raises(exceptions.GimbalLock):
        euler_from_rotation(rotation_from_euler(10.0, pitch, 5.0))


def test_geometry_not_a_rotation():
    with pytest.raises(exceptions.DegenerateGeometry):
        euler_from_rotation(np.diag([1.0, 1.0, -1.0]))
    assert not is_rotation(np.eye(3) * 1.01)
    assert not is_rotation(np.eye(2))


def test_geometry_rotation_angle(rng):
    base = Rotation.random(random_state=3).as_matrix()
    tilted = base @ rotation_from_euler(2.0, 0.0, 0.0)
    assert rotation_angle_deg(base, tilted) == pytest.approx(2.0, abs=1e-9)
    assert rotation_angle_deg(base, base) == pytest.approx(0.0, abs=1e-9)
