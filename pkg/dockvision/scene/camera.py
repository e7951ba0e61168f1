"""Pinhole camera model: intrinsics, rigid poses and projection."""
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dockvision import exceptions
from dockvision.geometry import (
    euler_from_rotation,
    is_rotation,
    rotation_from_euler,
)
from dockvision.types import FloatArray, PixelType


class CameraIntrinsics(BaseModel):
    """Pinhole parameters, the upper 3x3 block of the intrinsic matrix K."""

    k_x: float = Field(140.0, gt=0, description="Horizontal pixels per unit scaling.")
    k_y: float = Field(140.0, gt=0, description="Vertical pixels per unit scaling.")
    k_theta: float = Field(0.0, description="Skew coefficient.")
    u_0: float = Field(56.0, ge=0, description="Principal point column in pixels.")
    v_0: float = Field(56.0, ge=0, description="Principal point row in pixels.")
    image_width: int = Field(112, gt=0, description="Image width in pixels.")
    image_height: int = Field(112, gt=0, description="Image height in pixels.")

    model_config = ConfigDict(extra='forbid', validate_assignment=True, frozen=True)

    @model_validator(mode='after')
    def check_principal_point(self) -> 'CameraIntrinsics':
        if not self.u_0 < self.image_width or not self.v_0 < self.image_height:
            raise ValueError(
                f"Principal point ({self.u_0}, {self.v_0}) must lie inside the "
                f"{self.image_width}x{self.image_height} image."
            )
        return self

    @property
    def matrix(self) -> FloatArray:
        return np.array(
            [
                [self.k_x, self.k_theta, self.u_0],
                [0.0, self.k_y, self.v_0],
                [0.0, 0.0, 1.0],
            ]
        )

    def normalize(self, pixels: FloatArray) -> FloatArray:
        """K^-1 applied to (n, 2) pixels, returning (n, 3) homogeneous rays (z = 1)."""
        pixels = np.atleast_2d(np.asarray(pixels, dtype=np.float64))
        y = (pixels[:, 1] - self.v_0) / self.k_y
        x = (pixels[:, 0] - self.u_0 - self.k_theta * y) / self.k_x
        return np.column_stack([x, y, np.ones(len(pixels))])

    def contains(self, pixels: FloatArray) -> np.ndarray:
        """Boolean mask of pixels falling on the sensor."""
        pixels = np.atleast_2d(pixels)
        return (
            (pixels[:, 0] >= 0)
            & (pixels[:, 0] <= self.image_width - 1)
            & (pixels[:, 1] >= 0)
            & (pixels[:, 1] <= self.image_height - 1)
        )


@dataclass(frozen=True)
class Pose:
    """
    Rigid transform from the station reference frame to the camera frame,
     X_c = R X_r + T, translation in mm.
    """

    rotation: FloatArray
    translation: FloatArray

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=np.float64).reshape(3, 3)
        translation = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if not is_rotation(rotation):
            raise exceptions.DegenerateGeometry(
                "Pose rotation must satisfy R^T R = I and det(R) = +1."
            )
        if not np.all(np.isfinite(translation)):
            raise exceptions.NonFiniteInput("Pose translation must be finite.")
        object.__setattr__(self, 'rotation', rotation)
        object.__setattr__(self, 'translation', translation)

    @classmethod
    def from_euler(
        cls, yaw: float, pitch: float, roll: float, translation
    ) -> 'Pose':
        return cls(rotation_from_euler(yaw, pitch, roll), np.asarray(translation))

    @classmethod
    def identity(cls, distance: float = 3000.0) -> 'Pose':
        return cls(np.eye(3), np.array([0.0, 0.0, distance]))

    @property
    def euler(self) -> tuple[float, float, float]:
        """(yaw, pitch, roll) in degrees."""
        return euler_from_rotation(self.rotation)

    @property
    def yaw(self) -> float:
        return self.euler[0]

    @property
    def pitch(self) -> float:
        return self.euler[1]

    @property
    def roll(self) -> float:
        return self.euler[2]

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.translation))

    def transform(self, points_r: FloatArray) -> FloatArray:
        points_r = np.atleast_2d(np.asarray(points_r, dtype=np.float64))
        return points_r @ self.rotation.T + self.translation

    def scaled(self, scale: float) -> 'Pose':
        return Pose(self.rotation, self.translation * scale)

    def to_dict(self) -> dict:
        return {
            'R': [float(i) for i in self.rotation.ravel()],
            'T': [float(i) for i in self.translation],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Pose':
        return cls(np.asarray(data['R'], dtype=np.float64), data['T'])


def project_points(
    points_r: FloatArray, intr: CameraIntrinsics, pose: Pose
) -> FloatArray:
    """Vectorized `project`, (n, 3) reference points to (n, 2) pixels."""
    points_c = pose.transform(points_r)
    if np.any(points_c[:, 2] <= 0):
        raise exceptions.PointBehindCamera(
            f"{int(np.sum(points_c[:, 2] <= 0))} point(s) have camera depth z_c <= 0."
        )
    homogeneous = points_c @ intr.matrix.T
    return homogeneous[:, :2] / homogeneous[:, 2:3]


def project(point_r, intr: CameraIntrinsics, pose: Pose) -> PixelType:
    """Dehomogenized K [R|T] X_r for a single reference point in mm."""
    u, v = project_points(np.asarray(point_r, dtype=np.float64)[None], intr, pose)[0]
    return float(u), float(v)
