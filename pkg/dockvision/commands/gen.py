import logging

from pydantic import Field

from dockvision.models import BaseCommand
from dockvision.scene.dataset import generate_dataset, manifest_checksum

logger = logging.getLogger(__name__)


class GenCommand(BaseCommand):
    """Render a synthetic dataset with pose ground truth."""

    command_name = 'gen'

    out: str | None = Field(
        None, description="Dataset directory, defaults to paths.dataset."
    )

    def exec(self) -> dict:
        config = self.run_config
        out_dir = self.out or config.path('dataset')
        manifest = generate_dataset(
            n_fg=config.dataset.n_fg,
            n_bg=config.dataset.n_bg,
            pose_range=config.poses,
            spec=config.render,
            out_dir=out_dir,
            layout=config.layout,
            intr=config.camera,
            seed=config.seed,
            distractors=config.dataset.distractors,
            partial_fraction=config.dataset.partial_fraction,
            workers=config.workers,
            image_format=config.image.format,
        )
        return {
            'dataset': out_dir,
            'samples': len(manifest),
            'checksum': manifest_checksum(manifest),
        }
