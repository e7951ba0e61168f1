import logging

from pydantic import Field

from dockvision.evaluation.pose import pose_errors
from dockvision.models import BaseCommand
from dockvision.pnp.solver import noise_trials
from dockvision.scene.dataset import sample_pose
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.console import print_table
from dockvision.utils.files import write_csv
from dockvision.utils.seeds import derive_rng, derive_seed

logger = logging.getLogger(__name__)

BENCH_HEADER = [
    'sigma',
    'trials',
    'failures',
    'mean_orientation_deg',
    'median_orientation_deg',
    'mean_position_mm',
    'median_position_mm',
    'mean_abs_yaw_deg',
    'mean_abs_pitch_deg',
    'mean_abs_roll_deg',
]

# Stream keys under the master seed
POSE_STREAM = 2
NOISE_STREAM = 3


class BenchPnpCommand(BaseCommand):
    """
    Pose noise robustness: solve from exact projections plus Gaussian pixel noise of
     every configured sigma and report mean / median pose errors per level.
    """

    command_name = 'bench-pnp'

    out: str | None = Field(None, description="Result CSV, defaults to paths.bench.")
    quiet: bool = Field(False, description="Do not print the result table.")

    def exec(self) -> list[dict]:
        config = self.run_config
        bench = config.bench
        out = self.out or config.path('bench')

        rng = derive_rng(config.seed, POSE_STREAM)
        poses = [
            sample_pose(bench.pose_range, bench.camera, config.layout, rng)
            for _ in range(bench.trials)
        ]

        rows = []
        for level, sigma in enumerate(bench.sigmas):
            logger.info(f"Running {bench.trials} trials at sigma={sigma} px.")
            trials = noise_trials(
                poses,
                config.layout,
                bench.camera,
                sigma,
                bench.trials,
                seed=derive_seed(config.seed, NOISE_STREAM, level),
                workers=config.workers,
            )
            row = {'sigma': sigma, 'trials': bench.trials, 'failures': trials.failures}
            if trials.pairs:
                row.update(pose_errors(trials.pairs).summary())
                row['trials'] = bench.trials
            else:
                row.update({i: float('nan') for i in BENCH_HEADER[3:]})
            rows.append(row)

        write_csv(
            out,
            BENCH_HEADER,
            [[row[i] for i in BENCH_HEADER] for row in rows],
            comment=f'schema_version={SCHEMA_VERSION}',
        )
        if not self.quiet:
            print_table(
                ['sigma', 'failures', 'orientation deg', 'position mm'],
                [
                    [
                        row['sigma'],
                        row['failures'],
                        row['mean_orientation_deg'],
                        row['mean_position_mm'],
                    ]
                    for row in rows
                ],
                title="Pose error by pixel noise",
            )
        return rows
