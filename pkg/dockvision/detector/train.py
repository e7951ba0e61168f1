"""Minibatch SGD with momentum over a dataset manifest."""
import logging
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from dockvision import exceptions
from dockvision.detector.encoding import GridEncoding, encode_target
from dockvision.detector.loss import LossWeights, loss
from dockvision.detector.network import TinyNet
from dockvision.scene.dataset import DatasetManifest
from dockvision.types import SCHEMA_VERSION, FloatArray
from dockvision.utils.files import write_csv
from dockvision.utils.images import read_image, to_uint8
from dockvision.utils.seeds import derive_rng

logger = logging.getLogger(__name__)

CURVE_HEADER = ['epoch', 'l_B', 'l_d', 'l_dbar', 'total']


class SgdSettings(BaseModel):
    lr: float = Field(0.005, ge=0, description="Learning rate.")
    momentum: float = Field(0.9, ge=0, lt=1, description="Momentum coefficient.")
    epochs: int = Field(30, ge=0, description="Passes over the manifest.")
    batch: int = Field(16, gt=0, description="Minibatch size.")
    seed: int = Field(0, ge=0, description="Seed of the shuffling and the init.")
    clip_norm: float | None = Field(
        10.0, gt=0, description="Clip the batch gradient norm, null disables."
    )
    lr_steps: list[int] = Field(
        [], description="Epochs after which the learning rate is scaled by lr_drop."
    )
    lr_drop: float = Field(0.1, gt=0, le=1, description="Learning rate step factor.")

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    def lr_at(self, epoch: int) -> float:
        """Learning rate of the 1 based `epoch`."""
        return self.lr * self.lr_drop ** sum(epoch > i for i in self.lr_steps)


@dataclass
class EpochLoss:
    epoch: int
    l_B: float
    l_d: float
    l_dbar: float
    total: float

    def row(self) -> list:
        return [self.epoch, self.l_B, self.l_d, self.l_dbar, self.total]


@dataclass
class TrainResult:
    net: TinyNet
    curve: list[EpochLoss] = field(default_factory=list)


class SampleCache:
    """Decoded 8 bit images and grid targets of a manifest."""

    def __init__(self, manifest: DatasetManifest, G: int, B: int):
        if len(manifest) == 0:
            raise exceptions.PreconditionViolation(
                "Can not train on an empty manifest."
            )
        self.images = np.stack(
            [to_uint8(read_image(manifest.image_path(i))) for i in manifest]
        )
        self.targets: list[GridEncoding] = [
            encode_target(i.box if i.label == 'foreground' else None, G, B)
            for i in manifest
        ]

    def __len__(self) -> int:
        return len(self.targets)

    def batch(self, indices, dtype) -> FloatArray:
        return self.images[indices].astype(dtype) / 255.0


def batch_loss(
    pred: FloatArray, targets: list[GridEncoding], weights: LossWeights
) -> tuple[np.ndarray, FloatArray]:
    """Per sample (l_B, l_d, l_dbar, total) rows and the gradient of the mean total."""
    grad = np.zeros_like(pred)
    terms = np.zeros((len(targets), 4))
    # Fixed order reduction keeps batches bit reproducible.
    for index, target in enumerate(targets):
        result = loss(pred[index], target, weights)
        terms[index] = (result.l_B, result.l_d, result.l_dbar, result.total)
        grad[index] = result.grad / len(targets)
    return terms, grad


def train(
    net: TinyNet,
    manifest: DatasetManifest,
    weights: LossWeights,
    sgd: SgdSettings,
    curve_path: str | None = None,
) -> TrainResult:
    """
    Deterministic given `sgd.seed`: the sample order of each epoch comes from a
     stream derived from (seed, epoch). The per epoch mean of every loss term is
     returned and optionally written as CSV.
    """
    samples = SampleCache(manifest, net.arch.G, net.arch.B)
    velocity = np.zeros_like(net.params)
    result = TrainResult(net=net)

    for epoch in range(1, sgd.epochs + 1):
        lr = sgd.lr_at(epoch)
        order = derive_rng(sgd.seed, epoch).permutation(len(samples))
        totals = np.zeros(4)
        for start in range(0, len(order), sgd.batch):
            indices = order[start : start + sgd.batch]
            targets = [samples.targets[i] for i in indices]
            terms: np.ndarray = np.zeros(0)

            def loss_fn(pred):
                nonlocal terms
                if not np.all(np.isfinite(pred)):
                    raise exceptions.DivergenceDetected(
                        f"Network outputs became non-finite in epoch {epoch}."
                    )
                terms, grad = batch_loss(pred, targets, weights)
                return float(terms[:, 3].mean()), grad

            value, grad = net.value_and_grad(samples.batch(indices, net.dtype), loss_fn)
            if not np.isfinite(value) or not np.all(np.isfinite(grad)):
                raise exceptions.DivergenceDetected(
                    f"Training loss became non-finite in epoch {epoch}."
                )
            if sgd.clip_norm is not None:
                norm = float(np.linalg.norm(grad))
                if norm > sgd.clip_norm:
                    grad = grad * (sgd.clip_norm / norm)
            velocity = sgd.momentum * velocity - lr * grad
            net.params += velocity
            totals += terms.sum(axis=0)

        means = totals / len(samples)
        result.curve.append(EpochLoss(epoch, *(float(i) for i in means)))
        logger.info(
            f"epoch {epoch}/{sgd.epochs} lr={lr:.3g} total={means[3]:.6f} "
            f"l_B={means[0]:.6f} l_d={means[1]:.6f} l_dbar={means[2]:.6f}"
        )

    if curve_path is not None:
        write_loss_curve(curve_path, result.curve)
    return result


def write_loss_curve(path: str, curve: list[EpochLoss]):
    write_csv(
        path,
        CURVE_HEADER,
        [i.row() for i in curve],
        comment=f'schema_version={SCHEMA_VERSION}',
    )
