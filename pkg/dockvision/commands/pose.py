import logging

from pydantic import Field

from dockvision import exceptions
from dockvision.detector.checkpoint import load_checkpoint
from dockvision.detector.inference import detect
from dockvision.landmarks.consolidate import LandmarkSet
from dockvision.landmarks.ordering import order_landmarks
from dockvision.landmarks.pipeline import estimate_pose_from_patch
from dockvision.models import BaseCommand
from dockvision.pnp.solver import solve_with_orderings
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.files import read_config_file, write_json
from dockvision.utils.images import read_image
from dockvision.utils.log import log_stage

logger = logging.getLogger(__name__)

FULL_IMAGE_BOX = (0.0, 0.0, 1.0, 1.0)


def read_centroids(path: str) -> list[tuple[float, float]]:
    """A json / yaml list of [u, v] pairs, bare or under a `centroids` key."""
    document = read_config_file(path)
    if isinstance(document, dict):
        document = document.get('centroids')
    if not isinstance(document, list) or not all(
        isinstance(i, (list, tuple)) and len(i) == 2 for i in document
    ):
        raise exceptions.IoFailure(f"{path} does not hold a list of [u, v] centroids.")
    return [(float(u), float(v)) for u, v in document]


class PoseCommand(BaseCommand):
    """Estimate the station pose from an image or from landmark centroids."""

    command_name = 'pose'

    image: str | None = Field(None, description="Image to estimate the pose from.")
    centroids: str | None = Field(
        None, description="json / yaml file of landmark centroids in pixels."
    )
    box: list[float] | None = Field(
        None,
        description="Normalized x y w h of the station, skips the detector.",
    )
    checkpoint: str | None = Field(
        None, description="Detector checkpoint locating the station in the image."
    )
    out: str | None = Field(None, description="Pose JSON, defaults to paths.pose.")

    def exec(self) -> dict:
        config = self.run_config
        if (self.image is None) == (self.centroids is None):
            raise exceptions.ConfigInvalid("Give exactly one of --image / --centroids.")
        if self.box is not None and len(self.box) != 4:
            raise exceptions.ConfigInvalid("--box takes four values, x y w h.")

        timings = {}
        if self.centroids is not None:
            landmarks = LandmarkSet(
                read_centroids(self.centroids), 'Full', expected=config.layout.count
            )
            with log_stage(timings, 'pose', logger):
                solution = solve_with_orderings(
                    order_landmarks(landmarks), config.layout.points, config.camera
                )
            output = {'landmarks': landmarks.to_dict()}
        else:
            image = read_image(self.image)
            box = tuple(self.box) if self.box is not None else FULL_IMAGE_BOX
            output = {}
            if self.box is None and self.checkpoint is not None:
                with log_stage(timings, 'detection', logger):
                    detection = detect(load_checkpoint(self.checkpoint), [image])[0]
                box = detection.box
                output['detection'] = detection.to_dict()
            estimate = estimate_pose_from_patch(
                image, box, config.layout, config.camera, config.landmarks
            )
            solution = estimate.solution
            timings.update(estimate.timings)
            output['landmarks'] = estimate.landmarks.to_dict()

        output.update(
            {
                'pose': solution.to_dict(),
                'candidates': solution.candidate_count,
                'timings_s': timings,
                'schema_version': SCHEMA_VERSION,
            }
        )
        write_json(self.out or config.path('pose'), output)
        logger.info(
            f"Pose T={[round(float(i), 1) for i in solution.pose.translation]} mm, "
            f"rmse={solution.reprojection_rmse:.4f} px"
        )
        return output
