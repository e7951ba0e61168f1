import logging
import os

from pydantic import Field

from dockvision.deform.suite import deform_manifest
from dockvision.models import BaseCommand
from dockvision.scene.dataset import MANIFEST_NAME, manifest_checksum, read_manifest

logger = logging.getLogger(__name__)


class DeformCommand(BaseCommand):
    """Derive a deformed copy of a dataset, ground truth unchanged."""

    command_name = 'deform'

    dataset: str | None = Field(
        None, description="Source dataset directory, defaults to paths.dataset."
    )
    out: str | None = Field(
        None, description="Output directory, defaults to paths.deformed."
    )
    op: str | None = Field(None, description="Deformation op, defaults to deform.op.")
    param: float | None = Field(
        None, description="Op parameter, defaults to deform.param."
    )

    def exec(self) -> dict:
        config = self.run_config
        source = self.dataset or config.path('dataset')
        out_dir = self.out or config.path('deformed')
        op = self.op or config.deform.op
        param = config.deform.param if self.param is None else self.param

        manifest = read_manifest(os.path.join(source, MANIFEST_NAME))
        derived = deform_manifest(
            manifest,
            op,
            param,
            out_dir,
            settings=config.deform,
        )
        skipped = sum(1 for i in derived if i.deform and 'skipped' in i.deform)
        return {
            'dataset': out_dir,
            'op': op,
            'param': param,
            'samples': len(derived),
            'skipped': skipped,
            'checksum': manifest_checksum(derived),
        }
