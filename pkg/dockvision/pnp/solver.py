"""
Robust non-iterative perspective-n-point solver.

The correspondences are split into (n - 2) triples sharing the rotation axis edge, each
triple gives a quartic h_j in the depth ratio x of the axis endpoints and the summed
squared cost H = sum h_j^2 is minimized through the real roots of H'. Every local
minimum fixes the axis direction in the camera frame, the rotation about the axis and
the translation follow from a linear least squares over all projections, and the pose
is tidied up by aligning the reference points with the back projected camera points.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from dockvision import exceptions
from dockvision.geometry import rotation_angle_deg
from dockvision.pnp.polynomials import derivative, evaluate, multiply, real_roots
from dockvision.pnp.subsets import (
    Correspondence,
    QuarticCoeffs,
    as_arrays,
    subset_arrays,
)
from dockvision.scene.camera import CameraIntrinsics, Pose, project_points
from dockvision.scene.layout import LandmarkLayout
from dockvision.types import FloatArray
from dockvision.utils.seeds import derive_rng

logger = logging.getLogger(__name__)

# Companion eigenvalues of H' are treated as real below this relative imaginary part,
# spurious ones are rejected by the reprojection error.
STATIONARY_IMAG_TOLERANCE = 1e-3
FLAT_CURVATURE = 1e-12
# Cyclic shifts of a symmetric ring fit equally well up to the pixel noise, their
# residuals agree within this band.
ORDERING_TIE_RTOL = 0.05
ORDERING_TIE_ATOL = 0.05


@dataclass(frozen=True)
class PnpSolution:
    pose: Pose
    reprojection_rmse: float
    candidate_count: int
    candidates: tuple[float, ...] = field(default_factory=tuple)
    ordering: int | None = None

    def to_dict(self) -> dict:
        return {
            'R': [float(i) for i in self.pose.rotation.ravel()],
            'T': [float(i) for i in self.pose.translation],
            'euler': list(self.pose.euler),
            'rmse': self.reprojection_rmse,
        }


def cost_polynomial(quartics) -> tuple[FloatArray, FloatArray]:
    """
    H = sum_j h_j^2 (degree 8) and H' (degree 7), ascending coefficients. Accepts
     QuarticCoeffs or rows of ascending quartic coefficients.
    """
    rows = [q.coefficients if isinstance(q, QuarticCoeffs) else q for q in quartics]
    if len(rows) == 0:
        raise exceptions.PreconditionViolation("The cost needs at least one quartic.")
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    cost = multiply(rows, rows).sum(axis=0)
    return cost, derivative(cost)


def _rmse(
    points_r: FloatArray,
    pixels: FloatArray,
    intr: CameraIntrinsics,
    rotation: FloatArray,
    translation: FloatArray,
) -> float:
    points_c = points_r @ rotation.T + translation
    if np.any(points_c[:, 2] <= 0):
        raise exceptions.PointBehindCamera(
            "Candidate places a point behind the camera."
        )
    homogeneous = points_c @ intr.matrix.T
    residual = homogeneous[:, :2] / homogeneous[:, 2:3] - pixels
    return float(np.sqrt(np.mean(np.sum(residual**2, axis=1))))


def reprojection_rmse(
    corr: list[Correspondence], intr: CameraIntrinsics, pose: Pose
) -> float:
    """Root mean square pixel distance between observations and projections."""
    points_r, pixels = as_arrays(corr)
    residual = project_points(points_r, intr, pose) - pixels
    return float(np.sqrt(np.mean(np.sum(residual**2, axis=1))))


def _frame(axis: FloatArray) -> FloatArray:
    """Right handed orthonormal basis whose first column is `axis`."""
    helper = np.zeros(3)
    helper[np.argmin(np.abs(axis))] = 1.0
    second = np.cross(axis, helper)
    second /= np.linalg.norm(second)
    return np.column_stack([axis, second, np.cross(axis, second)])


def align_points(points_r: FloatArray, points_c: FloatArray):
    """Least squares rigid transform with points_c ~ R points_r + T, det(R) = +1."""
    mean_r = points_r.mean(axis=0)
    mean_c = points_c.mean(axis=0)
    u, _, vt = np.linalg.svd((points_r - mean_r).T @ (points_c - mean_c))
    sign = np.sign(np.linalg.det(vt.T @ u.T)) or 1.0
    rotation = vt.T @ np.diag([1.0, 1.0, sign]) @ u.T
    return rotation, mean_c - rotation @ mean_r


def _translation(points_r, rays, rotation) -> FloatArray:
    rotated = points_r @ rotation.T
    n = len(points_r)
    design = np.zeros((2 * n, 3))
    design[:n, 0] = 1.0
    design[:n, 2] = -rays[:, 0]
    design[n:, 1] = 1.0
    design[n:, 2] = -rays[:, 1]
    rhs = np.concatenate(
        [
            rays[:, 0] * rotated[:, 2] - rotated[:, 0],
            rays[:, 1] * rotated[:, 2] - rotated[:, 1],
        ]
    )
    return np.linalg.lstsq(design, rhs, rcond=None)[0]


def _candidate(
    ratio: float,
    edge: tuple[int, int],
    points_r: FloatArray,
    rays: FloatArray,
    unit_rays: FloatArray,
):
    """Pose for one depth ratio. `rays` are normalized image points with z = 1."""
    i, j = edge
    axis_c = ratio * unit_rays[j] - unit_rays[i]
    norm_c = np.linalg.norm(axis_c)
    if norm_c == 0:
        return None
    axis_r = points_r[j] - points_r[i]
    frame_c = _frame(axis_c / norm_c)
    frame_r = _frame(axis_r / np.linalg.norm(axis_r))

    # R P = A + cos(t) B + sin(t) C for a rotation t about the axis.
    q = points_r @ frame_r
    a = np.outer(q[:, 0], frame_c[:, 0])
    b = np.outer(q[:, 1], frame_c[:, 1]) + np.outer(q[:, 2], frame_c[:, 2])
    c = np.outer(q[:, 1], frame_c[:, 2]) - np.outer(q[:, 2], frame_c[:, 1])

    n = len(points_r)
    design = np.zeros((2 * n, 5))
    rhs = np.zeros(2 * n)
    for row, axis in ((slice(0, n), 0), (slice(n, 2 * n), 1)):
        coord = rays[:, axis]
        design[row, 0] = b[:, axis] - coord * b[:, 2]
        design[row, 1] = c[:, axis] - coord * c[:, 2]
        design[row, 2 + axis] = 1.0
        design[row, 4] = -coord
        rhs[row] = coord * a[:, 2] - a[:, axis]
    cos_t, sin_t = np.linalg.lstsq(design, rhs, rcond=None)[0][:2]
    theta = np.arctan2(sin_t, cos_t)

    rotation_x = np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, np.cos(theta), -np.sin(theta)],
            [0.0, np.sin(theta), np.cos(theta)],
        ]
    )
    rotation = frame_c @ rotation_x @ frame_r.T
    translation = _translation(points_r, rays, rotation)

    depths = (points_r @ rotation.T + translation)[:, 2]
    if np.any(depths <= 0):
        return None
    return align_points(points_r, depths[:, None] * rays)


def solve_arrays(
    points_r: FloatArray, pixels: FloatArray, intr: CameraIntrinsics
) -> PnpSolution:
    """`rpnp_solve` on (n, 3) reference points and (n, 2) pixels."""
    points_r = np.asarray(points_r, dtype=np.float64).reshape(-1, 3)
    pixels = np.asarray(pixels, dtype=np.float64).reshape(-1, 2)
    if len(points_r) != len(pixels):
        raise exceptions.ShapeMismatch(
            f"Got {len(points_r)} reference points for {len(pixels)} image points."
        )
    if not np.all(np.isfinite(points_r)) or not np.all(np.isfinite(pixels)):
        raise exceptions.NonFiniteInput("Correspondence coordinates must be finite.")
    subsets = subset_arrays(points_r, pixels, intr)
    spread = np.linalg.svd(points_r - points_r.mean(axis=0), compute_uv=False)
    if spread[1] <= 1e-9 * spread[0]:
        raise exceptions.DegenerateGeometry("All reference points are collinear.")

    for k in subsets.others[subsets.collinear]:
        logger.debug(f"Skipping collinear triple {(*subsets.edge, int(k))}.")
    if subsets.collinear.all():
        raise exceptions.DegenerateGeometry("Every triple is collinear.")

    _, slope = cost_polynomial(subsets.quartics())
    try:
        stationary = np.array(real_roots(slope, imag_tol=STATIONARY_IMAG_TOLERANCE))
    except exceptions.ZeroPolynomial:
        stationary = np.zeros(0)
    stationary = stationary[stationary > 0]
    curvature = evaluate(derivative(slope), stationary)

    minima: list[float] = []
    for x, bend in zip(stationary, curvature):
        if minima and abs(x - minima[-1]) <= 1e-12 * max(1.0, abs(x)):
            continue
        if bend > 0 or abs(bend) < FLAT_CURVATURE:
            minima.append(float(x))
    if not minima:
        raise exceptions.NoMinimumFound(
            "The cost derivative has no positive real root with H'' > 0."
        )

    rays = intr.normalize(pixels)
    unit_rays = rays / np.linalg.norm(rays, axis=1, keepdims=True)
    best, scores = None, []
    for x in minima:
        candidate = _candidate(x, subsets.edge, points_r, rays, unit_rays)
        if candidate is None:
            continue
        try:
            score = _rmse(points_r, pixels, intr, *candidate)
        except exceptions.PointBehindCamera:
            continue
        scores.append(score)
        if best is None or score < best[0]:
            best = (score, candidate)
    if best is None:
        raise exceptions.DegenerateGeometry(
            "No candidate pose places every reference point in front of the camera."
        )
    score, (rotation, translation) = best
    return PnpSolution(
        pose=Pose(rotation, translation),
        reprojection_rmse=score,
        candidate_count=len(scores),
        candidates=tuple(scores),
    )


def rpnp_solve(corr: list[Correspondence], intr: CameraIntrinsics) -> PnpSolution:
    """Pose of the reference frame from n >= 4 2D-3D correspondences."""
    if len(corr) < 4:
        raise exceptions.PreconditionViolation(
            f"Pose recovery needs at least 4 correspondences, got {len(corr)}."
        )
    points_r, pixels = as_arrays(corr)
    return solve_arrays(points_r, pixels, intr)


def solve_with_orderings(
    orderings: list[FloatArray], points_r: FloatArray, intr: CameraIntrinsics
) -> PnpSolution:
    """
    Solve once per candidate assignment of image points to `points_r` and keep the
     least reprojection error. An evenly spaced ring projects identically under every
     cyclic shift, so residuals within `ORDERING_TIE_RTOL` relative plus
     `ORDERING_TIE_ATOL` px of the least count as tied. Shifted solutions differ by a
     twist about the ring axis and the one closest to R = I, ie with the smallest
     twist, wins. The winning index is stored in `ordering`.
    """
    solutions, error = [], None
    for index, pixels in enumerate(orderings):
        try:
            solution = solve_arrays(points_r, pixels, intr)
        except (exceptions.NoMinimumFound, exceptions.DegenerateGeometry) as e:
            logger.debug(f"Ordering {index} failed: {e.message}")
            error = e
            continue
        solutions.append(replace(solution, ordering=index))
    if not solutions:
        if error is None:
            raise exceptions.PreconditionViolation("No candidate ordering was given.")
        raise error

    least = min(i.reprojection_rmse for i in solutions)
    tied = [
        i
        for i in solutions
        if i.reprojection_rmse <= least * (1 + ORDERING_TIE_RTOL) + ORDERING_TIE_ATOL
    ]
    if len(tied) > 1:
        logger.debug(f"{len(tied)} orderings tie at rmse={least:.6g} px.")
    return min(tied, key=lambda i: rotation_angle_deg(i.pose.rotation, np.eye(3)))


@dataclass
class NoiseTrials:
    sigma: float
    truths: list[Pose] = field(default_factory=list)
    estimates: list[Pose] = field(default_factory=list)
    failures: int = 0

    @property
    def pairs(self) -> list[tuple[Pose, Pose]]:
        return list(zip(self.estimates, self.truths))


def _noise_trial(task: tuple) -> Pose | None:
    pose, points_r, intr, sigma, seed, trial = task
    pixels = project_points(points_r, intr, pose)
    if sigma > 0:
        pixels = pixels + derive_rng(seed, trial).normal(0.0, sigma, pixels.shape)
    try:
        return solve_arrays(points_r, pixels, intr).pose
    except (exceptions.NoMinimumFound, exceptions.DegenerateGeometry):
        return None


def noise_trials(
    pose: Pose | list[Pose],
    layout: LandmarkLayout,
    intr: CameraIntrinsics,
    sigma: float,
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> NoiseTrials:
    """
    Solve `trials` times from exact projections perturbed by isotropic Gaussian pixel
     noise of std `sigma`. A list of poses gives one pose per trial.
    """
    poses = pose if isinstance(pose, list) else [pose] * trials
    if len(poses) != trials:
        raise exceptions.ShapeMismatch(f"Got {len(poses)} poses for {trials} trials.")
    tasks = [(p, layout.points, intr, sigma, seed, i) for i, p in enumerate(poses)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            estimates = list(executor.map(_noise_trial, tasks, chunksize=64))
    else:
        estimates = [_noise_trial(i) for i in tasks]

    result = NoiseTrials(sigma=sigma)
    for truth, estimate in zip(poses, estimates):
        if estimate is None:
            result.failures += 1
            continue
        result.truths.append(truth)
        result.estimates.append(estimate)
    if result.failures:
        logger.info(f"{result.failures} of {trials} trials at sigma={sigma} failed.")
    return result
