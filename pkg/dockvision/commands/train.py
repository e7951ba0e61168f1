import logging
import os

from pydantic import Field

from dockvision.detector.checkpoint import save_checkpoint
from dockvision.detector.network import TinyNet
from dockvision.detector.train import train
from dockvision.models import BaseCommand
from dockvision.scene.dataset import MANIFEST_NAME, read_manifest

logger = logging.getLogger(__name__)


class TrainCommand(BaseCommand):
    """Train the grid detector on the training split of a dataset."""

    command_name = 'train'

    dataset: str | None = Field(
        None, description="Dataset directory, defaults to paths.dataset."
    )
    checkpoint: str | None = Field(
        None, description="Checkpoint to write, defaults to paths.checkpoint."
    )
    curve: str | None = Field(
        None, description="Loss curve CSV, defaults to paths.loss_curve."
    )

    def exec(self) -> dict:
        config = self.run_config
        source = self.dataset or config.path('dataset')
        checkpoint = self.checkpoint or config.path('checkpoint')
        curve_path = self.curve or config.path('loss_curve')

        manifest = read_manifest(os.path.join(source, MANIFEST_NAME))
        training, _ = manifest.split(config.dataset.holdout)
        logger.info(f"Training on {len(training)} of {len(manifest)} samples.")

        sgd = config.train.sgd()
        net = TinyNet(config.net_arch(), seed=sgd.seed, dtype=config.dtype)
        result = train(net, training, config.loss, sgd, curve_path=curve_path)
        save_checkpoint(checkpoint, result.net)
        return {
            'checkpoint': checkpoint,
            'curve': curve_path,
            'epochs': len(result.curve),
            'final_loss': result.curve[-1].total if result.curve else None,
        }
