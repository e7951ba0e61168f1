"""
Named deformations applied over a whole manifest. Every op takes
(image, record, param, rng, settings) and returns the deformed image, the ground truth
is never changed.
"""
import logging
import os
from typing import Callable, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from dockvision import exceptions
from dockvision.deform.blur import gaussian_blur
from dockvision.deform.color import gamma_contrast, hsv_shift
from dockvision.deform.composite import CompositeMode
from dockvision.deform.illumination import (
    IlluminationModel,
    apply_illumination,
    build_illumination_model,
    synthesize_illumination_corpus,
)
from dockvision.deform.samples import make_mirror_sample, make_noisy_luminary_sample
from dockvision.image import ImageBuffer
from dockvision.scene.dataset import (
    MANIFEST_NAME,
    DatasetManifest,
    ManifestRecord,
    write_manifest,
)
from dockvision.utils.images import read_image, write_image
from dockvision.utils.seeds import derive_rng

logger = logging.getLogger(__name__)

DeformOp = Literal['blur', 'hue', 'sat', 'val', 'gamma', 'illum', 'mirror', 'noisy']

# Parameter grids of the robustness study.
BLUR_SIGMAS = tuple(float(i) for i in range(1, 11))
LAMBDA_GRID = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
GAMMA_GRID = tuple(round(0.2 * i, 1) for i in range(1, 18))
SWEEP_GRIDS: dict[str, tuple[float, ...]] = {
    'blur': BLUR_SIGMAS,
    'hue': LAMBDA_GRID,
    'sat': LAMBDA_GRID,
    'val': LAMBDA_GRID,
    'gamma': GAMMA_GRID,
    'illum': (0.5, 1.0, 2.0),
    'mirror': (0.0,),
    'noisy': (1.0, 2.0, 3.0),
}


class DeformSettings(BaseModel):
    op: DeformOp = Field('blur', description="Deformation applied by `deform`.")
    param: float = Field(1.0, description="Parameter of the op, see the docs.")
    seed: int = Field(0, ge=0, description="Seed of the per sample streams.")
    composite_mode: CompositeMode = Field(
        'GradientDomain', description="How mirror and luminary patches are pasted."
    )
    mirror_gap: tuple[float, float] = Field(
        (0.2, 0.6), description="Mirror gap range as a fraction of the box height."
    )
    luminary_sigma: float = Field(1.5, gt=0, description="Distractor spot sigma in px.")
    luminary_peak: float = Field(0.9, gt=0, le=1, description="Distractor intensity.")
    illum_mean: list[float] = Field(
        [1.0, -0.3, 0.1, 0.2, 0.1, -0.1, -0.2, 0.05, 0.05],
        description="Means of the synthetic illumination coefficients.",
    )
    illum_std: list[float] = Field(
        [0.1, 0.1, 0.05, 0.1, 0.05, 0.05, 0.05, 0.02, 0.02],
        description="Stds of the synthetic illumination coefficients.",
    )
    illum_corpus_size: int = Field(
        50, ge=2, description="Fields in the synthetic illumination corpus."
    )

    model_config = ConfigDict(extra='forbid', validate_assignment=True)

    def illumination_model(self, scale: float = 1.0) -> IlluminationModel:
        """
        Model fitted on a synthetic corpus drawn from the configured coefficient
         Gaussians, its spread multiplied by `scale`.
        """
        truth = IlluminationModel(
            mean=self.illum_mean, var=[s**2 for s in self.illum_std]
        )
        corpus = synthesize_illumination_corpus(
            truth, self.illum_corpus_size, (32, 32), seed=self.seed
        )
        fitted = build_illumination_model(corpus)
        return fitted.model_copy(update={'var': [v * scale**2 for v in fitted.var]})


DeformFn = Callable[
    [ImageBuffer, ManifestRecord, float, np.random.Generator, DeformSettings],
    ImageBuffer,
]


def _blur(image, record, param, rng, settings):
    return gaussian_blur(image, param)


def _hsv(channel):
    def shift(image, record, param, rng, settings):
        return hsv_shift(image, channel, param)

    return shift


def _gamma(image, record, param, rng, settings):
    return gamma_contrast(image, param)


def _illum(image, record, param, rng, settings):
    return apply_illumination(image, settings.illumination_model(param), rng)


def _mirror(image, record, param, rng, settings):
    if record.box is None:
        return image
    return make_mirror_sample(
        image,
        record.box,
        rng,
        gap_range=settings.mirror_gap,
        mode=settings.composite_mode,
    )[0]


def _noisy(image, record, param, rng, settings):
    return make_noisy_luminary_sample(
        image,
        record.box,
        rng,
        count=int(round(param)),
        sigma=settings.luminary_sigma,
        peak=settings.luminary_peak,
        mode=settings.composite_mode,
    )[0]


DEFORMATIONS: dict[str, DeformFn] = {
    'blur': _blur,
    'hue': _hsv('H'),
    'sat': _hsv('S'),
    'val': _hsv('V'),
    'gamma': _gamma,
    'illum': _illum,
    'mirror': _mirror,
    'noisy': _noisy,
}


def get_deformation(op: str) -> DeformFn:
    if op not in DEFORMATIONS:
        raise exceptions.ConfigInvalid(
            f"Unknown deformation op={op}. Use one of {', '.join(DEFORMATIONS)}."
        )
    return DEFORMATIONS[op]


def deform_manifest(
    manifest: DatasetManifest,
    op: str,
    param: float,
    out_dir: str,
    settings: DeformSettings | None = None,
    seed: int | None = None,
) -> DatasetManifest:
    """
    Apply `op` to every sample and write the derived dataset. Samples an op can not
     deform, ie no room for a mirror, are copied and flagged in their record.
    """
    settings = settings or DeformSettings()
    seed = settings.seed if seed is None else seed
    deformation = get_deformation(op)
    if op == 'illum':
        # Fit once for the whole manifest.
        model = settings.illumination_model(param)

        def illuminate(image, record, param, rng, settings):
            return apply_illumination(image, model, rng)

        deformation = illuminate

    records = []
    for index, record in enumerate(manifest):
        image = read_image(manifest.image_path(record))
        note = {'op': op, 'param': float(param), 'seed': seed}
        try:
            image = deformation(image, record, param, derive_rng(seed, index), settings)
        except (exceptions.NoRoomAbove, exceptions.PlacementFailed) as e:
            logger.debug(f"{record.id} left unchanged: {e.message}")
            note['skipped'] = e.__class__.__name__
        write_image(os.path.join(out_dir, record.path), image)
        records.append(record.model_copy(update={'deform': note}))

    derived = DatasetManifest(root=os.path.abspath(out_dir), records=records)
    write_manifest(os.path.join(out_dir, MANIFEST_NAME), derived)
    logger.info(f"Wrote {len(records)} samples deformed by {op}({param}) to {out_dir}.")
    return derived
