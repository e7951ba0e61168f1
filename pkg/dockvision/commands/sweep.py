import logging
import os

from pydantic import Field

from dockvision.commands.detect import build_net, detect_manifest
from dockvision.deform.suite import SWEEP_GRIDS, deform_manifest, get_deformation
from dockvision.evaluation.detection import ScoredDetection, roc_curve
from dockvision.models import BaseCommand
from dockvision.scene.dataset import MANIFEST_NAME, read_manifest
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.console import print_table
from dockvision.utils.files import write_csv

logger = logging.getLogger(__name__)

SWEEP_HEADER = ['op', 'param', 'auc', 'n_pos', 'n_neg']


class SweepCommand(BaseCommand):
    """AUC of the detector on the held out split under every level of a deformation."""

    command_name = 'sweep'

    dataset: str | None = Field(
        None, description="Dataset directory, defaults to paths.dataset."
    )
    checkpoint: str | None = Field(
        None, description="Detector checkpoint, defaults to paths.checkpoint."
    )
    op: str | None = Field(None, description="Deformation op, defaults to deform.op.")
    params: list[float] | None = Field(
        None, description="Levels to sweep, defaults to the op's standard grid."
    )
    out: str | None = Field(None, description="Result CSV, defaults to paths.sweep.")
    untrained: bool = Field(
        False, description="Use a freshly initialized network instead of a checkpoint."
    )
    quiet: bool = Field(False, description="Do not print the result table.")

    def exec(self) -> list[dict]:
        config = self.run_config
        source = self.dataset or config.path('dataset')
        op = self.op or config.deform.op
        get_deformation(op)
        params = self.params if self.params is not None else list(SWEEP_GRIDS[op])
        out = self.out or config.path('sweep')

        _, held = read_manifest(os.path.join(source, MANIFEST_NAME)).split(
            config.dataset.holdout
        )
        checkpoint = self.checkpoint or config.path('checkpoint')
        net = build_net(config, checkpoint, self.untrained)

        rows = []
        for param in params:
            level_dir = os.path.join(config.path('deformed'), f'{op}-{param:g}')
            derived = deform_manifest(
                held, op, param, level_dir, settings=config.deform
            )
            detections = [
                ScoredDetection.from_record(i) for i in detect_manifest(net, derived)
            ]
            curve = roc_curve(detections)
            logger.info(f"{op}({param:g}) auc={curve.auc:.6f}")
            rows.append(
                {
                    'op': op,
                    'param': float(param),
                    'auc': curve.auc,
                    'n_pos': curve.n_pos,
                    'n_neg': curve.n_neg,
                }
            )

        write_csv(
            out,
            SWEEP_HEADER,
            [[row[i] for i in SWEEP_HEADER] for row in rows],
            comment=f'schema_version={SCHEMA_VERSION}',
        )
        if not self.quiet:
            print_table(
                SWEEP_HEADER,
                [[row[i] for i in SWEEP_HEADER] for row in rows],
                title=f"AUC under {op}",
            )
        return rows
