"""All exceptions are defined here."""
from typing import Any

from dockvision.types import SCHEMA_VERSION


class DockvisionException(Exception):
    """Base exception class. Every error raised by dockvision derives from it."""

    code: int = 1

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        """Machine readable form written by the CLI to stderr."""
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'schema_version': SCHEMA_VERSION,
        }


#
# Base exceptions - Ones that are subclassed later
#


class GeometryException(DockvisionException):
    """Base for camera / pose geometry failures."""


class NumericException(DockvisionException):
    """Base for failures of the numerical kernels."""


class ImageException(DockvisionException):
    """Base for image processing failures."""


class DatasetException(DockvisionException):
    """Base for dataset and training failures."""


class ConfigException(DockvisionException):
    """Base for configuration and command line failures."""


#
# Geometry
#


class PointBehindCamera(GeometryException):
    """Raised when a point transforms to a camera depth z_c <= 0."""


class NoLandmarkVisible(GeometryException):
    """Raised when rendering a scene where no landmark projects inside the image."""


class DegenerateGeometry(GeometryException):
    """
    Raised when a point configuration cannot constrain a pose, ie coincident or
     collinear reference points.
    """


class PreconditionViolation(GeometryException):
    """Raised when a solver is called with too few correspondences."""


class GimbalLock(GeometryException):
    """Raised when Euler angles are requested at |pitch| >= 89.99 degrees."""


class NoMinimumFound(NumericException):
    """Raised when the cost derivative has no real root with positive curvature."""


class ZeroPolynomial(NumericException):
    """Raised when root finding is asked for the roots of an all zero polynomial."""


class NonFiniteInput(NumericException):
    """Raised when a tensor contains NaN or inf values."""


class ShapeMismatch(NumericException):
    """Raised when a tensor shape does not fit the layer / grid it is fed to."""


class SingularFit(NumericException):
    """Raised when a least squares design matrix is rank deficient."""


class CorpusTooSmall(NumericException):
    """Raised when fitting a distribution from fewer than two samples."""


class AllPixelsExcluded(NumericException):
    """Raised when every pixel is excluded from a ratio estimate."""


#
# Images
#


class EmptyPatch(ImageException):
    """Raised when an image patch has no pixels."""


class PartialObservation(ImageException):
    """Raised when fewer than eight landmarks were found but a full set is required."""


class BoxOutOfRange(ImageException):
    """Raised when a normalized box leaves [0, 1]^2."""


class NonPositiveSigma(ImageException):
    """Raised when a blur is requested with sigma <= 0."""


class PatchOutOfBounds(ImageException):
    """Raised when a composited patch does not fit inside the base image."""


class NoRoomAbove(ImageException):
    """Raised when there is no room above a station to place its mirror image."""


class PlacementFailed(ImageException):
    """Raised when rejection sampling could not place distractors."""


#
# Datasets / training / evaluation
#


class IoFailure(DatasetException):
    """Raised when reading or writing an artifact fails."""


class DivergenceDetected(DatasetException):
    """Raised when the training loss becomes non-finite."""


class DegenerateLabels(DatasetException):
    """Raised when a ROC curve is requested with only one class present."""


#
# Configuration
#


class ConfigInvalid(ConfigException):
    """Raised when a run configuration fails validation or has unknown keys."""


class UnknownCommand(ConfigException):
    """Raised when an unknown subcommand is requested."""

    def __init__(self, command_name: str, available: list[str]):
        super().__init__(
            f"The command=\"{command_name}\" is not available. Available commands "
            f"are {', '.join(sorted(available))}."
        )
