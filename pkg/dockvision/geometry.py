"""
Rotation helpers shared by the renderer, the solver and the evaluation harness. Euler
angles follow the intrinsic Z-Y-X (yaw, pitch, roll) convention.
"""
import numpy as np
from scipy.spatial.transform import Rotation

from dockvision import exceptions
from dockvision.types import FloatArray

EULER_SEQUENCE = 'ZYX'
GIMBAL_LOCK_DEG = 89.99
ROTATION_TOLERANCE = 1e-9


def rotation_from_euler(yaw: float, pitch: float, roll: float) -> FloatArray:
    """R = Rz(yaw) @ Ry(pitch) @ Rx(roll), angles in degrees."""
    return Rotation.from_euler(
        EULER_SEQUENCE, [yaw, pitch, roll], degrees=True
    ).as_matrix()


def euler_from_rotation(rotation: FloatArray) -> tuple[float, float, float]:
    """Inverse of `rotation_from_euler`, returning (yaw, pitch, roll) in degrees."""
    rotation = np.asarray(rotation, dtype=np.float64)
    if not is_rotation(rotation, atol=1e-6):
        raise exceptions.DegenerateGeometry("Input is not a rotation matrix.")
    pitch = np.degrees(np.arcsin(np.clip(-rotation[2, 0], -1.0, 1.0)))
    if abs(pitch) >= GIMBAL_LOCK_DEG:
        raise exceptions.GimbalLock(
            f"Pitch of {pitch:.4f} deg is within gimbal lock of +/-90 deg."
        )
    yaw, pitch, roll = Rotation.from_matrix(rotation).as_euler(
        EULER_SEQUENCE, degrees=True
    )
    return float(yaw), float(pitch), float(roll)


def is_rotation(rotation: FloatArray, atol: float = ROTATION_TOLERANCE) -> bool:
    rotation = np.asarray(rotation)
    if rotation.shape != (3, 3) or not np.all(np.isfinite(rotation)):
        return False
    return bool(
        np.allclose(rotation.T @ rotation, np.eye(3), rtol=0.0, atol=atol)
        and abs(np.linalg.det(rotation) - 1.0) <= atol
    )


def rotation_angle_deg(rotation_a: FloatArray, rotation_b: FloatArray) -> float:
    """Geodesic angle in degrees of the relative rotation A^T B."""
    relative = np.asarray(rotation_a).T @ np.asarray(rotation_b)
    return float(np.degrees(Rotation.from_matrix(relative).magnitude()))
