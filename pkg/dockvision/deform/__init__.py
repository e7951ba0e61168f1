from dockvision.deform.blur import gaussian_blur, gaussian_kernel, kernel_side
from dockvision.deform.color import (
    estimate_gamma,
    estimate_lambda,
    gamma_contrast,
    hsv_shift,
)
from dockvision.deform.composite import composite_patch, solve_poisson
from dockvision.deform.illumination import (
    IlluminationModel,
    apply_illumination,
    build_illumination_model,
    fit_illumination,
    fit_residual,
    synthesize_illumination_corpus,
)
from dockvision.deform.samples import make_mirror_sample, make_noisy_luminary_sample
from dockvision.deform.suite import (
    DEFORMATIONS,
    SWEEP_GRIDS,
    DeformSettings,
    deform_manifest,
    get_deformation,
)

__all__ = [
    'DEFORMATIONS',
    'DeformSettings',
    'IlluminationModel',
    'SWEEP_GRIDS',
    'apply_illumination',
    'build_illumination_model',
    'composite_patch',
    'deform_manifest',
    'estimate_gamma',
    'estimate_lambda',
    'fit_illumination',
    'fit_residual',
    'gamma_contrast',
    'gaussian_blur',
    'gaussian_kernel',
    'get_deformation',
    'hsv_shift',
    'kernel_side',
    'make_mirror_sample',
    'make_noisy_luminary_sample',
    'solve_poisson',
    'synthesize_illumination_corpus',
]
