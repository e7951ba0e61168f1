"""Pose error statistics over (estimate, truth) pairs."""
import logging
from dataclasses import dataclass, field

import numpy as np

from dockvision import exceptions
from dockvision.geometry import rotation_angle_deg
from dockvision.scene.camera import Pose

logger = logging.getLogger(__name__)


def wrap_degrees(angle):
    """Wrap into (-180, 180]."""
    wrapped = -((180.0 - np.asarray(angle, dtype=np.float64)) % 360.0) + 180.0
    return wrapped if np.ndim(wrapped) else float(wrapped)


@dataclass(frozen=True)
class TrialError:
    orientation_deg: float
    position_mm: float
    relative_position: float
    # Estimated minus true Euler angle, nan when either pose is in gimbal lock
    yaw_deg: float = float('nan')
    pitch_deg: float = float('nan')
    roll_deg: float = float('nan')

    def to_dict(self) -> dict:
        return {
            'orientation_deg': self.orientation_deg,
            'position_mm': self.position_mm,
            'relative_position': self.relative_position,
            'yaw_deg': self.yaw_deg,
            'pitch_deg': self.pitch_deg,
            'roll_deg': self.roll_deg,
        }


def trial_error(estimate: Pose, truth: Pose) -> TrialError:
    orientation = rotation_angle_deg(estimate.rotation, truth.rotation)
    position = float(np.linalg.norm(estimate.translation - truth.translation))
    distance = truth.distance
    relative = position / distance if distance > 0 else float('inf')
    try:
        deltas = wrap_degrees(np.subtract(estimate.euler, truth.euler))
    except exceptions.GimbalLock:
        deltas = (float('nan'),) * 3
    return TrialError(
        orientation_deg=orientation,
        position_mm=position,
        relative_position=relative,
        yaw_deg=float(deltas[0]),
        pitch_deg=float(deltas[1]),
        roll_deg=float(deltas[2]),
    )


@dataclass
class PoseErrorStats:
    mean_orientation_deg: float
    median_orientation_deg: float
    mean_position_mm: float
    median_position_mm: float
    mean_relative_position: float
    # Mean absolute Euler deltas, the per axis form of the ground benchmark tables
    mean_abs_yaw_deg: float
    mean_abs_pitch_deg: float
    mean_abs_roll_deg: float
    trials: list[TrialError] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.trials)

    def summary(self) -> dict:
        return {
            'trials': self.count,
            'mean_orientation_deg': self.mean_orientation_deg,
            'median_orientation_deg': self.median_orientation_deg,
            'mean_position_mm': self.mean_position_mm,
            'median_position_mm': self.median_position_mm,
            'mean_relative_position': self.mean_relative_position,
            'mean_abs_yaw_deg': self.mean_abs_yaw_deg,
            'mean_abs_pitch_deg': self.mean_abs_pitch_deg,
            'mean_abs_roll_deg': self.mean_abs_roll_deg,
        }


def _nan_mean_abs(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    return float(np.abs(finite).mean()) if finite.size else float('nan')


def pose_errors(trials: list[tuple[Pose, Pose]]) -> PoseErrorStats:
    """Aggregate errors of `(estimate, truth)` pairs."""
    if not trials:
        raise exceptions.PreconditionViolation("Pose errors need at least one trial.")
    errors = [trial_error(estimate, truth) for estimate, truth in trials]
    orientation = np.array([i.orientation_deg for i in errors])
    position = np.array([i.position_mm for i in errors])
    relative = np.array([i.relative_position for i in errors])
    logger.debug(f"Aggregated pose errors over {len(errors)} trials.")
    return PoseErrorStats(
        mean_orientation_deg=float(orientation.mean()),
        median_orientation_deg=float(np.median(orientation)),
        mean_position_mm=float(position.mean()),
        median_position_mm=float(np.median(position)),
        mean_relative_position=float(relative.mean()),
        mean_abs_yaw_deg=_nan_mean_abs(np.array([i.yaw_deg for i in errors])),
        mean_abs_pitch_deg=_nan_mean_abs(np.array([i.pitch_deg for i in errors])),
        mean_abs_roll_deg=_nan_mean_abs(np.array([i.roll_deg for i in errors])),
        trials=errors,
    )
