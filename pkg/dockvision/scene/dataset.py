"""
Pose sampling and synthetic dataset generation. A dataset is a directory of images plus
a `manifest.jsonl` with one record per sample.
"""
import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dockvision import exceptions
from dockvision.scene.camera import CameraIntrinsics, Pose
from dockvision.scene.layout import LandmarkLayout
from dockvision.scene.render import (
    RenderSpec,
    render_empty,
    render_scene,
    visible_projections,
)
from dockvision.types import SCHEMA_VERSION, SampleLabel
from dockvision.utils.files import (
    dumps_compact,
    make_sure_path_exists,
    read_jsonl,
    write_jsonl,
)
from dockvision.utils.images import write_image
from dockvision.utils.seeds import derive_rng, derive_seed

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.jsonl'


class PoseRange(BaseModel):
    """Uniform pose sampler bounds. Angles in degrees, distances in mm."""

    yaw_deg: float = Field(40.0, ge=0, lt=90, description="Yaw half range.")
    pitch_deg: float = Field(40.0, ge=0, lt=89, description="Pitch half range.")
    roll_deg: float = Field(40.0, ge=0, le=180, description="Roll half range.")
    distance_min_mm: float = Field(
        3000.0, gt=0, description="Closest station distance."
    )
    distance_max_mm: float = Field(
        15000.0, gt=0, description="Farthest station distance."
    )
    margin: float = Field(
        0.25,
        ge=0,
        lt=0.5,
        description="Image fraction kept free around the sampled station centre.",
    )
    max_attempts: int = Field(1000, gt=0, description="Rejection sampling budget.")

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    @model_validator(mode='after')
    def check_distances(self) -> 'PoseRange':
        if self.distance_min_mm > self.distance_max_mm:
            raise ValueError("distance_min_mm must not exceed distance_max_mm.")
        return self


POSE_RANGE_PRESETS = {
    'default': PoseRange(),
    'ground': PoseRange(distance_min_mm=3000.0, distance_max_mm=5000.0),
    'sea': PoseRange(distance_min_mm=10000.0, distance_max_mm=15000.0),
    # Near head on final approach. The twist about the ring axis stays within
    # +/-22.5 deg, where the eight fold symmetric ring still fixes the orientation.
    'docking': PoseRange(
        yaw_deg=15.0,
        pitch_deg=25.0,
        roll_deg=25.0,
        distance_min_mm=3000.0,
        distance_max_mm=5000.0,
    ),
}


def sample_pose(
    pose_range: PoseRange,
    intr: CameraIntrinsics,
    layout: LandmarkLayout,
    rng: np.random.Generator,
    full: bool = True,
) -> Pose:
    """
    Draw a pose with uniform Euler angles and distance. The station centre is placed on
     a uniformly drawn pixel and back projected to the sampled distance. With `full`
     every landmark must land in the image, otherwise at least one but not all of them.
    """
    width, height = intr.image_width, intr.image_height
    for _ in range(pose_range.max_attempts):
        yaw = rng.uniform(-pose_range.yaw_deg, pose_range.yaw_deg)
        pitch = rng.uniform(-pose_range.pitch_deg, pose_range.pitch_deg)
        roll = rng.uniform(-pose_range.roll_deg, pose_range.roll_deg)
        distance = rng.uniform(pose_range.distance_min_mm, pose_range.distance_max_mm)
        if full:
            u = rng.uniform(pose_range.margin * width, (1 - pose_range.margin) * width)
            v = rng.uniform(
                pose_range.margin * height, (1 - pose_range.margin) * height
            )
        else:
            u = rng.uniform(-0.1 * width, 1.1 * width)
            v = rng.uniform(-0.1 * height, 1.1 * height)
        ray = intr.normalize([[u, v]])[0]
        pose = Pose.from_euler(yaw, pitch, roll, distance * ray / np.linalg.norm(ray))

        _, visible = visible_projections(layout, intr, pose)
        if full and visible.all():
            return pose
        if not full and 0 < visible.sum() < layout.count:
            return pose
    raise exceptions.PreconditionViolation(
        f"No {'full' if full else 'partial'} observation pose found in "
        f"{pose_range.max_attempts} attempts. Widen the image or the distance range."
    )


class ManifestRecord(BaseModel):
    id: str
    path: str = Field(..., description="Image path relative to the manifest.")
    label: SampleLabel
    box: tuple[float, float, float, float] | None = None
    pose: dict[str, list[float]] | None = None
    centroids: list[tuple[float, float]] = Field(default_factory=list)
    partial: bool = False
    schema_version: int = SCHEMA_VERSION
    deform: dict | None = Field(
        None, description="Deformation op and parameters of derived samples."
    )

    model_config = ConfigDict(extra='forbid')

    def get_pose(self) -> Pose | None:
        return None if self.pose is None else Pose.from_dict(self.pose)

    def to_record(self) -> dict:
        return self.model_dump(exclude_none=True)


class DatasetManifest(BaseModel):
    root: str = Field(..., description="Directory image paths are relative to.")
    records: list[ManifestRecord] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[ManifestRecord]:  # type: ignore[override]
        return iter(self.records)

    def image_path(self, record: ManifestRecord) -> str:
        return os.path.join(self.root, record.path)

    def by_label(self, label: SampleLabel) -> list[ManifestRecord]:
        return [i for i in self.records if i.label == label]

    def split(self, n_holdout: int) -> tuple['DatasetManifest', 'DatasetManifest']:
        """Deterministic split keeping `n_holdout` samples of each label at the end."""
        train, held = [], []
        for label in ('foreground', 'background'):
            records = self.by_label(label)  # type: ignore[arg-type]
            cut = max(0, len(records) - n_holdout)
            train += records[:cut]
            held += records[cut:]
        return (
            DatasetManifest(root=self.root, records=train),
            DatasetManifest(root=self.root, records=held),
        )


def write_manifest(path: str, manifest: DatasetManifest):
    write_jsonl(path, [i.to_record() for i in manifest.records])


def read_manifest(path: str) -> DatasetManifest:
    records = [ManifestRecord(**i) for i in read_jsonl(path)]
    for record in records:
        if record.schema_version != SCHEMA_VERSION:
            raise exceptions.IoFailure(
                f"Manifest {path} has schema_version={record.schema_version}, "
                f"expected {SCHEMA_VERSION}."
            )
    return DatasetManifest(root=os.path.dirname(os.path.abspath(path)), records=records)


def manifest_checksum(manifest: DatasetManifest) -> str:
    """sha256 over the serialized records, independent of the root directory."""
    digest = hashlib.sha256()
    for record in manifest.records:
        digest.update(dumps_compact(record.to_record()).encode('utf-8'))
        digest.update(b'\n')
    return digest.hexdigest()


def _generate_sample(task: tuple) -> dict:
    (
        index,
        label,
        partial,
        seed,
        out_dir,
        image_format,
        layout,
        intr,
        pose_range,
        spec,
        distractors,
    ) = task
    render_spec = spec.model_copy(update={'rng_seed': derive_seed(seed, index, 1)})
    sample_id = f"{'fg' if label == 'foreground' else 'bg'}-{index:06d}"
    path = f"images/{sample_id}.{image_format}"

    if label == 'foreground':
        pose = sample_pose(
            pose_range, intr, layout, derive_rng(seed, index, 0), full=not partial
        )
        image, truth = render_scene(
            layout, intr, pose, render_spec, allow_partial=partial
        )
        record = ManifestRecord(
            id=sample_id,
            path=path,
            label=label,
            box=truth.box,
            pose=pose.to_dict(),
            centroids=truth.centroids,
            partial=truth.partial,
        )
    else:
        image = render_empty(intr, render_spec, distractors=distractors)
        record = ManifestRecord(id=sample_id, path=path, label=label)

    write_image(os.path.join(out_dir, path), image)
    return record.to_record()


def generate_dataset(
    n_fg: int,
    n_bg: int,
    pose_range: PoseRange,
    spec: RenderSpec,
    out_dir: str,
    layout: LandmarkLayout | None = None,
    intr: CameraIntrinsics | None = None,
    seed: int = 0,
    distractors: int = 0,
    partial_fraction: float = 0.0,
    workers: int = 1,
    image_format: str = 'png',
) -> DatasetManifest:
    """
    Render `n_fg` foreground and `n_bg` background samples into `out_dir` and write the
     manifest. Every sample draws from its own stream derived from (seed, index) so the
     result does not depend on `workers`.
    """
    if n_fg < 0 or n_bg < 0:
        raise exceptions.PreconditionViolation("Sample counts must be nonnegative.")
    if not 0.0 <= partial_fraction <= 1.0:
        raise exceptions.PreconditionViolation("partial_fraction must be in [0, 1].")
    layout = layout or LandmarkLayout()
    intr = intr or CameraIntrinsics()
    if not make_sure_path_exists(out_dir) or not os.access(out_dir, os.W_OK):
        raise exceptions.IoFailure(f"Unable to write to directory={out_dir}.")

    n_partial = int(round(partial_fraction * n_fg))
    tasks = []
    for index in range(n_fg + n_bg):
        label = 'foreground' if index < n_fg else 'background'
        partial = label == 'foreground' and index >= n_fg - n_partial
        tasks.append(
            (
                index,
                label,
                partial,
                seed,
                out_dir,
                image_format,
                layout,
                intr,
                pose_range,
                spec,
                distractors,
            )
        )

    logger.info(
        f"Generating {n_fg} foreground and {n_bg} background samples in {out_dir}."
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            raw = list(executor.map(_generate_sample, tasks, chunksize=16))
    else:
        raw = [_generate_sample(i) for i in tasks]

    manifest = DatasetManifest(
        root=os.path.abspath(out_dir), records=[ManifestRecord(**i) for i in raw]
    )
    write_manifest(os.path.join(out_dir, MANIFEST_NAME), manifest)
    logger.debug(f"Manifest checksum {manifest_checksum(manifest)}")
    return manifest
