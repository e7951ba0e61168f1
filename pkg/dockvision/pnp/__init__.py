from dockvision.geometry import euler_from_rotation, rotation_from_euler
from dockvision.pnp.polynomials import real_roots
from dockvision.pnp.solver import (
    NoiseTrials,
    PnpSolution,
    cost_polynomial,
    noise_trials,
    reprojection_rmse,
    rpnp_solve,
    solve_arrays,
    solve_with_orderings,
)
from dockvision.pnp.subsets import (
    Correspondence,
    QuarticCoeffs,
    SubsetTriple,
    build_subsets,
    correspondences,
    subset_to_quartic,
)

__all__ = [
    'Correspondence',
    'NoiseTrials',
    'PnpSolution',
    'QuarticCoeffs',
    'SubsetTriple',
    'build_subsets',
    'correspondences',
    'cost_polynomial',
    'euler_from_rotation',
    'noise_trials',
    'real_roots',
    'reprojection_rmse',
    'rotation_from_euler',
    'rpnp_solve',
    'solve_arrays',
    'solve_with_orderings',
    'subset_to_quartic',
]
