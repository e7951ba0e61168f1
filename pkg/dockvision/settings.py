"""
Run configuration. A run is described by one YAML document whose sections map onto the
settings models of each package, validated as a whole so an invalid config fails at load
time. `DockvisionSettings` holds process level defaults read from the environment.
"""
import logging
import os
from typing import IO, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from dockvision import exceptions
from dockvision.deform.suite import DeformSettings
from dockvision.detector.loss import LossWeights
from dockvision.detector.network import NetArch
from dockvision.detector.train import SgdSettings
from dockvision.landmarks.pipeline import LandmarkSettings
from dockvision.scene.camera import CameraIntrinsics
from dockvision.scene.dataset import POSE_RANGE_PRESETS, PoseRange
from dockvision.scene.layout import LandmarkLayout
from dockvision.scene.render import RenderSpec
from dockvision.utils.command import deep_merge, unpack_overrides
from dockvision.utils.files import dump_yaml, read_config_file

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    model_config = ConfigDict(extra='forbid', validate_assignment=True)


class ImageSettings(Settings):
    size: int = Field(112, gt=0, description="Square image side in pixels.")
    channels: Literal[1, 3] = Field(3, description="1 for gray, 3 for RGB.")
    format: Literal['png', 'pgm', 'ppm'] = Field(
        'png', description="File format of generated images."
    )


class GridSettings(Settings):
    G: int = Field(7, gt=0, description="Grid cells per side.")
    B: int = Field(2, gt=0, description="Boxes per cell.")


class DatasetSettings(Settings):
    n_fg: int = Field(1000, ge=0, description="Foreground samples to render.")
    n_bg: int = Field(1000, ge=0, description="Background samples to render.")
    distractors: int = Field(
        2, ge=0, description="Distractor lights on each background sample."
    )
    partial_fraction: float = Field(
        0.0, ge=0, le=1, description="Fraction of foregrounds only partially in view."
    )
    holdout: int = Field(
        200, ge=0, description="Samples per label held out for evaluation."
    )


class TrainSettings(SgdSettings):
    filters: list[int] = Field(
        [8, 16, 32, 64], min_length=1, description="Filters of each conv stage."
    )
    kernel: int = Field(3, gt=0, description="Odd convolution kernel size.")
    dense: list[int] = Field(
        [256, 512], description="Hidden sizes of the fully connected stages."
    )
    lr_steps: list[int] = Field(
        [20, 26], description="Epochs after which the rate is scaled by lr_drop."
    )

    def sgd(self) -> SgdSettings:
        return SgdSettings(**self.model_dump(include=set(SgdSettings.model_fields)))


def _bench_camera() -> CameraIntrinsics:
    # 8 MP desk camera, the ring spans 960 to 1600 px over the ground range.
    return CameraIntrinsics(
        k_x=4000.0,
        k_y=4000.0,
        u_0=1600.0,
        v_0=1200.0,
        image_width=3200,
        image_height=2400,
    )


class BenchSettings(Settings):
    sigmas: list[float] = Field(
        [0.0, 3.0, 5.0], description="Pixel noise standard deviations to sweep."
    )
    trials: int = Field(1000, gt=0, description="Trials per noise level.")
    preset: Literal['default', 'ground', 'sea', 'docking'] = Field(
        'ground', description="Pose range the trial poses are drawn from."
    )
    camera: CameraIntrinsics = Field(
        default_factory=_bench_camera,
        description="Camera of the benchmark, independent of the dataset camera.",
    )

    @property
    def pose_range(self) -> PoseRange:
        return POSE_RANGE_PRESETS[self.preset]


class PathSettings(Settings):
    """Artifact locations. Relative paths resolve against `out_dir`."""

    out_dir: str = Field('runs', description="Root of every run artifact.")
    dataset: str = Field('dataset', description="Generated dataset directory.")
    deformed: str = Field('deformed', description="Deformed dataset directory.")
    checkpoint: str = Field('checkpoint.json', description="Detector weights.")
    loss_curve: str = Field('loss.csv', description="Per epoch training losses.")
    detections: str = Field('detections.jsonl', description="Detector outputs.")
    roc: str = Field('roc.csv', description="ROC table.")
    roc_points: str = Field('roc_points.csv', description="Plot ready ROC points.")
    summary: str = Field('summary.json', description="AUC summary.")
    pose: str = Field('pose.json', description="Pose estimate.")
    bench: str = Field('bench_pnp.csv', description="Pose noise benchmark.")
    sweep: str = Field('sweep.csv', description="AUC per deformation level.")

    def resolve(self, name: str) -> str:
        path = getattr(self, name)
        return path if os.path.isabs(path) else os.path.join(self.out_dir, path)


class RunConfig(Settings):
    seed: int = Field(0, ge=0, description="Master seed every stream derives from.")
    workers: int = Field(1, ge=1, description="Worker processes, 1 is bit exact.")
    deterministic: bool = Field(
        True, description="Run the detector in float64, otherwise float32."
    )
    image: ImageSettings = Field(default_factory=ImageSettings)
    grid: GridSettings = Field(default_factory=GridSettings)
    loss: LossWeights = Field(default_factory=LossWeights)
    camera: CameraIntrinsics = Field(default_factory=CameraIntrinsics)
    layout: LandmarkLayout = Field(default_factory=LandmarkLayout)
    render: RenderSpec = Field(default_factory=RenderSpec)
    poses: PoseRange = Field(default_factory=PoseRange)
    dataset: DatasetSettings = Field(default_factory=DatasetSettings)
    deform: DeformSettings = Field(default_factory=DeformSettings)
    landmarks: LandmarkSettings = Field(default_factory=LandmarkSettings)
    train: TrainSettings = Field(default_factory=TrainSettings)
    bench: BenchSettings = Field(default_factory=BenchSettings)
    paths: PathSettings = Field(default_factory=PathSettings)

    @model_validator(mode='after')
    def check_consistency(self) -> 'RunConfig':
        size = self.image.size
        if (self.camera.image_width, self.camera.image_height) != (size, size):
            raise ValueError(
                f"camera image size {self.camera.image_width}x"
                f"{self.camera.image_height} must match image.size={size}."
            )
        if self.render.channels != self.image.channels:
            raise ValueError(
                f"render.channels={self.render.channels} must match "
                f"image.channels={self.image.channels}."
            )
        if size % self.grid.G:
            raise ValueError(f"image.size={size} must be divisible by G={self.grid.G}.")
        if self.landmarks.k != self.layout.count:
            raise ValueError(
                f"landmarks.k={self.landmarks.k} must match "
                f"layout.count={self.layout.count}."
            )
        pooling = 2 ** len(self.train.filters)
        if size % pooling:
            raise ValueError(
                f"image.size={size} must be divisible by {pooling} for "
                f"{len(self.train.filters)} pooling stages."
            )
        if self.train.kernel % 2 != 1:
            raise ValueError("train.kernel must be odd.")
        return self

    @property
    def dtype(self) -> str:
        return 'float64' if self.deterministic else 'float32'

    def net_arch(self) -> NetArch:
        return NetArch(
            input_size=self.image.size,
            channels=self.image.channels,
            filters=self.train.filters,
            kernel=self.train.kernel,
            dense=self.train.dense,
            G=self.grid.G,
            B=self.grid.B,
        )

    def path(self, name: str) -> str:
        return self.paths.resolve(name)


def load_config(
    path: str | None = None, overrides: list[str] | None = None
) -> RunConfig:
    """
    Read a yaml / json / toml run config, merge `key.path=value` overrides over it and
     validate the result.
    """
    raw = {}
    if path is not None:
        raw = read_config_file(path)
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise exceptions.ConfigInvalid(
                f"The config {path} must hold a mapping, got {type(raw).__name__}."
            )
    merged = deep_merge(raw, unpack_overrides(overrides))
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise exceptions.ConfigInvalid(f"Invalid run config:\n{e}") from None


def config_document(config: RunConfig) -> dict:
    return config.model_dump(mode='json')


def dump_config(config: RunConfig, stream: IO):
    """Write the effective config as YAML."""
    dump_yaml(config_document(config), stream)


class DockvisionSettings(BaseSettings):
    """Process settings, ie `DOCKVISION_CONFIG_PATH=run.yaml dockvision gen`."""

    config_path: str | None = Field(
        None, description="Run config used when a command gets no --config."
    )
    workers: int | None = Field(
        None, ge=1, description="Worker count overriding the run config."
    )
    log_level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'] = Field(
        'INFO', description="Level of the stdout log handler."
    )

    model_config = SettingsConfigDict(
        env_prefix='DOCKVISION_',
        env_file_encoding='utf-8',
        case_sensitive=False,
        extra="ignore",
        validate_assignment=True,
    )


settings = DockvisionSettings()
