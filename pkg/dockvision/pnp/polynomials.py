"""
Real polynomial helpers. Coefficients are stored in ascending order,
c[0] + c[1] x + ..., the layout used by `numpy.polynomial.polynomial`.
"""
import numpy as np
import numpy.polynomial.polynomial as poly

from dockvision import exceptions
from dockvision.types import FloatArray

IMAG_TOLERANCE = 1e-8
RESIDUAL_TOLERANCE = 1e-12
NEWTON_ITERATIONS = 2


def trim(coeffs) -> FloatArray:
    """Drop exactly zero leading (highest order) coefficients."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if not np.all(np.isfinite(coeffs)):
        raise exceptions.NonFiniteInput("Polynomial coefficients must be finite.")
    nonzero = np.flatnonzero(coeffs)
    if len(nonzero) == 0:
        raise exceptions.ZeroPolynomial("Every coefficient of the polynomial is zero.")
    return coeffs[: nonzero[-1] + 1]


def newton_polish(
    coeffs: FloatArray,
    roots,
    slope_coeffs: FloatArray | None = None,
    iterations: int = NEWTON_ITERATIONS,
):
    """Newton steps on real roots, each accepted only where it lowers |p|."""
    if slope_coeffs is None:
        slope_coeffs = poly.polyder(coeffs)
    scalar = np.ndim(roots) == 0
    roots = np.atleast_1d(np.asarray(roots, dtype=np.float64))
    value = np.abs(poly.polyval(roots, coeffs))
    for _ in range(iterations):
        slope = poly.polyval(roots, slope_coeffs)
        active = (slope != 0) & (value != 0)
        step = np.divide(
            poly.polyval(roots, coeffs), slope, out=np.zeros_like(roots), where=active
        )
        candidate = roots - step
        candidate_value = np.abs(poly.polyval(candidate, coeffs))
        better = active & (candidate_value < value)
        if not better.any():
            break
        roots = np.where(better, candidate, roots)
        value = np.where(better, candidate_value, value)
    return float(roots[0]) if scalar else roots


def real_roots(coeffs, imag_tol: float = IMAG_TOLERANCE) -> list[float]:
    """
    Real roots in ascending order, repeated according to multiplicity.

    Eigenvalues of the companion matrix of the max-normalized polynomial are kept when
     their imaginary part is below `imag_tol * max(1, |z|)`, or when the real part is
     itself a root to working precision (multiple roots split into a tiny complex pair).
     Each kept root gets two guarded Newton iterations.
    """
    coeffs = trim(coeffs)
    if len(coeffs) == 1:
        return []
    coeffs = coeffs / np.max(np.abs(coeffs))
    eigenvalues = poly.polyroots(coeffs)
    x = eigenvalues.real
    keep = np.abs(eigenvalues.imag) <= imag_tol * np.maximum(1.0, np.abs(eigenvalues))
    if not keep.all():
        scale = poly.polyval(np.abs(x), np.abs(coeffs))
        keep |= np.abs(poly.polyval(x, coeffs)) <= RESIDUAL_TOLERANCE * scale
    if not keep.any():
        return []
    roots = newton_polish(coeffs, x[keep], poly.polyder(coeffs))
    return [float(i) for i in np.sort(roots)]


def multiply(a, b) -> FloatArray:
    """Products of polynomials stacked along the leading axes, ascending last axis."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    batch = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    out = np.zeros(batch + (a.shape[-1] + b.shape[-1] - 1,))
    for i in range(a.shape[-1]):
        out[..., i : i + b.shape[-1]] += a[..., i : i + 1] * b
    return out


def square(coeffs) -> FloatArray:
    return poly.polymul(coeffs, coeffs)


def derivative(coeffs, order: int = 1) -> FloatArray:
    return poly.polyder(np.asarray(coeffs, dtype=np.float64), m=order)


def evaluate(coeffs, x):
    return poly.polyval(x, coeffs)
