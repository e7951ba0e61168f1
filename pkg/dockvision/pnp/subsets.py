"""
Splitting n correspondences into (n - 2) point triples sharing a rotation axis edge,
and reducing each triple to a quartic in the depth ratio x = d_2 / d_1 of the axis
edge endpoints.
"""
from dataclasses import dataclass

import numpy as np

from dockvision import exceptions
from dockvision.pnp.polynomials import multiply
from dockvision.scene.camera import CameraIntrinsics
from dockvision.types import FloatArray

COLLINEAR_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Correspondence:
    """Reference point `P` in mm and its image `p` in pixels."""

    P: tuple[float, float, float]
    p: tuple[float, float]

    def __post_init__(self):
        if not np.all(np.isfinite(self.P)) or not np.all(np.isfinite(self.p)):
            raise exceptions.NonFiniteInput(
                "Correspondence coordinates must be finite."
            )


def as_arrays(corr: list[Correspondence]) -> tuple[FloatArray, FloatArray]:
    points_r = np.array([c.P for c in corr], dtype=np.float64).reshape(-1, 3)
    pixels = np.array([c.p for c in corr], dtype=np.float64).reshape(-1, 2)
    return points_r, pixels


def correspondences(points_r, pixels) -> list[Correspondence]:
    return [
        Correspondence(tuple(map(float, P)), tuple(map(float, p)))
        for P, p in zip(np.asarray(points_r), np.asarray(pixels))
    ]


@dataclass(frozen=True)
class SubsetTriple:
    """
    Points (i, j, k) where (i, j) is the rotation axis edge. Distances in mm. The view
     angles are stored as cosines between unit camera rays: `cos_gamma` between rays
     i and j, `cos_beta` between i and k, `cos_alpha` between j and k.
    """

    indices: tuple[int, int, int]
    d_12: float
    d_23: float
    d_13: float
    cos_alpha: float
    cos_beta: float
    cos_gamma: float
    collinear: bool = False


@dataclass(frozen=True)
class QuarticCoeffs:
    """h(x) = a x^4 + b x^3 + c x^2 + d x + e."""

    a: float
    b: float
    c: float
    d: float
    e: float

    @property
    def coefficients(self) -> FloatArray:
        """Ascending order, e first."""
        return np.array([self.e, self.d, self.c, self.b, self.a])

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)


def unit_rays(pixels: FloatArray, intr: CameraIntrinsics) -> FloatArray:
    rays = intr.normalize(pixels)
    return rays / np.linalg.norm(rays, axis=1, keepdims=True)


def axis_edge(pixels: FloatArray) -> tuple[int, int]:
    """The pair with the longest image separation, the first found on ties."""
    pixels = np.asarray(pixels, dtype=np.float64)
    first, second = np.triu_indices(len(pixels), k=1)
    distance = np.sum((pixels[first] - pixels[second]) ** 2, axis=1)
    best = int(np.argmax(distance))
    return int(first[best]), int(second[best])


@dataclass(frozen=True)
class SubsetArrays:
    """
    The n - 2 triples sharing the axis edge (i, j), one entry per third point in
     `others`. Same fields as `SubsetTriple`, the edge terms are scalars.
    """

    edge: tuple[int, int]
    others: np.ndarray
    d_12: float
    d_23: FloatArray
    d_13: FloatArray
    cos_alpha: FloatArray
    cos_beta: FloatArray
    cos_gamma: float
    collinear: np.ndarray

    def quartics(self) -> FloatArray:
        """Ascending quartic coefficients of every non collinear triple."""
        usable = ~self.collinear
        return quartic_coefficients(
            self.cos_gamma,
            self.cos_beta[usable],
            self.cos_alpha[usable],
            (self.d_13[usable] / self.d_12) ** 2,
            (self.d_23[usable] / self.d_12) ** 2,
        )

    def triples(self) -> list[SubsetTriple]:
        i, j = self.edge
        return [
            SubsetTriple(
                indices=(i, j, int(k)),
                d_12=self.d_12,
                d_23=float(self.d_23[n]),
                d_13=float(self.d_13[n]),
                cos_alpha=float(self.cos_alpha[n]),
                cos_beta=float(self.cos_beta[n]),
                cos_gamma=self.cos_gamma,
                collinear=bool(self.collinear[n]),
            )
            for n, k in enumerate(self.others)
        ]


def subset_arrays(
    points_r: FloatArray, pixels: FloatArray, intr: CameraIntrinsics
) -> SubsetArrays:
    """`build_subsets` on (n, 3) reference points and (n, 2) pixels."""
    if len(points_r) < 4:
        raise exceptions.PreconditionViolation(
            f"Pose recovery needs at least 4 correspondences, got {len(points_r)}."
        )
    rays = unit_rays(pixels, intr)
    i, j = axis_edge(pixels)
    others = np.array([k for k in range(len(points_r)) if k not in (i, j)])
    d_12 = float(np.linalg.norm(points_r[i] - points_r[j]))
    d_13 = np.linalg.norm(points_r[others] - points_r[i], axis=1)
    d_23 = np.linalg.norm(points_r[others] - points_r[j], axis=1)
    coincident = np.flatnonzero(np.minimum(np.minimum(d_13, d_23), d_12) <= 0)
    if len(coincident):
        raise exceptions.DegenerateGeometry(
            f"Points {(i, j, int(others[coincident[0]]))} contain coincident "
            f"reference points."
        )
    area = np.linalg.norm(
        np.cross(points_r[j] - points_r[i], points_r[others] - points_r[i]), axis=1
    )
    return SubsetArrays(
        edge=(i, j),
        others=others,
        d_12=d_12,
        d_23=d_23,
        d_13=d_13,
        cos_alpha=np.clip(rays[others] @ rays[j], -1.0, 1.0),
        cos_beta=np.clip(rays[others] @ rays[i], -1.0, 1.0),
        cos_gamma=float(np.clip(rays[i] @ rays[j], -1.0, 1.0)),
        collinear=area <= COLLINEAR_TOLERANCE * d_12 * d_13,
    )


def build_subsets(
    corr: list[Correspondence], intr: CameraIntrinsics
) -> list[SubsetTriple]:
    """Exactly n - 2 triples, each the axis edge plus one remaining point."""
    if len(corr) < 4:
        raise exceptions.PreconditionViolation(
            f"Pose recovery needs at least 4 correspondences, got {len(corr)}."
        )
    return subset_arrays(*as_arrays(corr), intr).triples()


def quartic_coefficients(c12, c1k, c2k, k1, k2) -> FloatArray:
    """
    Coefficients (ascending, last axis) of the quartic for one or many triples.

    With y = d_k / d_1 the law of cosines on the three rays gives
     1 + y^2 - 2 c1k y = K1 q(x) and x^2 + y^2 - 2 c2k x y = K2 q(x), where
     q(x) = x^2 - 2 c12 x + 1, K1 = d_13^2 / d_12^2 and K2 = d_23^2 / d_12^2.
     Their difference is linear in y, y M(x) = N(x), and substituting back leaves
     h(x) = N^2 - 2 c1k N M + (1 - K1 q) M^2.
    """
    c12, c1k, c2k, k1, k2 = np.broadcast_arrays(
        *[np.asarray(i, dtype=np.float64) for i in (c12, c1k, c2k, k1, k2)]
    )
    dk = k1 - k2
    # Ascending coefficient stacks, last axis is the power of x.
    n = np.stack([dk - 1, -2 * dk * c12, dk + 1], axis=-1)
    m = np.stack([-2 * c1k, 2 * c2k], axis=-1)
    p = np.stack([1 - k1, 2 * k1 * c12, -k1], axis=-1)

    h = multiply(n, n) + multiply(p, multiply(m, m))
    h[..., :4] += -2 * c1k[..., None] * multiply(n, m)
    return h


def subset_to_quartic(t: SubsetTriple) -> QuarticCoeffs:
    if t.collinear or min(t.d_12, t.d_13, t.d_23) <= 0:
        raise exceptions.DegenerateGeometry(
            f"Triple {t.indices} is collinear and cannot constrain the depth ratio."
        )
    coeffs = quartic_coefficients(
        t.cos_gamma,
        t.cos_beta,
        t.cos_alpha,
        t.d_13**2 / t.d_12**2,
        t.d_23**2 / t.d_12**2,
    )
    e, d, c, b, a = (float(i) for i in coeffs)
    return QuarticCoeffs(a=a, b=b, c=c, d=d, e=e)
