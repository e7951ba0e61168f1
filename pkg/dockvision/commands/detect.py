import logging
import os
from typing import Literal

from pydantic import Field

from dockvision.detector.checkpoint import load_checkpoint
from dockvision.detector.inference import detect
from dockvision.detector.network import TinyNet
from dockvision.models import BaseCommand
from dockvision.scene.dataset import MANIFEST_NAME, DatasetManifest, read_manifest
from dockvision.settings import RunConfig
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.files import write_jsonl
from dockvision.utils.images import read_image

logger = logging.getLogger(__name__)

DETECT_BATCH = 32


def detect_manifest(net: TinyNet, manifest: DatasetManifest) -> list[dict]:
    """One detections file record per sample, in manifest order."""
    records = []
    samples = manifest.records
    for start in range(0, len(samples), DETECT_BATCH):
        chunk = samples[start : start + DETECT_BATCH]
        images = [read_image(manifest.image_path(i)) for i in chunk]
        for record, detection in zip(chunk, detect(net, images, batch=DETECT_BATCH)):
            line = {
                'id': record.id,
                'label': record.label,
                'gt_box': list(record.box) if record.box is not None else None,
                'schema_version': SCHEMA_VERSION,
            }
            line.update(detection.to_dict())
            records.append(line)
    return records


def select_split(manifest: DatasetManifest, split: str, holdout: int):
    if split == 'all':
        return manifest
    training, held = manifest.split(holdout)
    return held if split == 'holdout' else training


def build_net(config: RunConfig, checkpoint: str, untrained: bool) -> TinyNet:
    if untrained:
        return TinyNet(config.net_arch(), seed=config.train.seed, dtype=config.dtype)
    return load_checkpoint(checkpoint)


class DetectCommand(BaseCommand):
    """Run the detector over a dataset and write one detection per sample."""

    command_name = 'detect'

    dataset: str | None = Field(
        None, description="Dataset directory, defaults to paths.dataset."
    )
    checkpoint: str | None = Field(
        None, description="Detector checkpoint, defaults to paths.checkpoint."
    )
    out: str | None = Field(
        None, description="Detections JSONL, defaults to paths.detections."
    )
    split: Literal['all', 'holdout', 'train'] = Field(
        'all', description="Which part of the dataset to score."
    )
    untrained: bool = Field(
        False, description="Use a freshly initialized network instead of a checkpoint."
    )

    def exec(self) -> dict:
        config = self.run_config
        source = self.dataset or config.path('dataset')
        out = self.out or config.path('detections')

        manifest = select_split(
            read_manifest(os.path.join(source, MANIFEST_NAME)),
            self.split,
            config.dataset.holdout,
        )
        checkpoint = self.checkpoint or config.path('checkpoint')
        net = build_net(config, checkpoint, self.untrained)
        records = detect_manifest(net, manifest)
        write_jsonl(out, records)
        logger.info(f"Wrote {len(records)} detections to {out}.")
        return {'detections': out, 'samples': len(records)}
