"""Pointwise geometry of eigenvector line bundles.

Metrics, curvatures and jet metrics are evaluated from kernel coefficients.
Statements of the form "for all w in the disk" are probed on polar grids;
a report always carries the grid it was computed on.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .kernels import BivariateKernel, DiagonalKernel, bivariate_product, diag_product, dirichlet_kernel
from .series import CoeffSeq, bivariate_derivative_eval, eval_radial, jet_entry_eval

MAX_JET_ORDER = 8


@dataclass(frozen=True)
class GridSpec:
    radii: tuple[float, ...]
    angles: int

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if len(r) < 1 or self.angles < 1:
            raise ValueError("a grid needs at least one radius and one angle")
        if np.any(r < 0) or np.any(r >= 1):
            raise ValueError("radii must lie in [0, 1)")
        if np.any(np.diff(r) <= 0):
            raise ValueError("radii must be increasing")

    @classmethod
    def polar(cls, n_radii: int = 24, r_max: float = 0.999, n_angles: int = 64) -> "GridSpec":
        """``n_radii`` equispaced radii from 0 to ``r_max`` inclusive."""
        if not 0 < r_max < 1:
            raise ValueError("r_max must lie in (0, 1)")
        return cls(tuple(np.linspace(0.0, r_max, n_radii).tolist()), n_angles)

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    @property
    def thetas(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.angles) / self.angles

    def points(self) -> np.ndarray:
        """Complex points, shape ``(len(radii), angles)``."""
        return np.asarray(self.radii)[:, None] * np.exp(1j * self.thetas)[None, :]

    def describe(self) -> dict:
        return {"radii": len(self.radii), "angles": self.angles, "r_min": self.radii[0], "r_max": self.r_max}


@dataclass(frozen=True)
class BoundsReport:
    quantity: str
    inf: float
    sup: float
    argmin: complex
    argmax: complex
    grid: GridSpec = field(repr=False)
    outer_ring_max: float = math.nan   # certified lower bound on the disk-wide sup (subharmonic quantities)

    @classmethod
    def from_values(cls, quantity: str, grid: GridSpec, values: np.ndarray) -> "BoundsReport":
        values = np.asarray(values, dtype=float)
        pts = grid.points()
        imin = np.unravel_index(np.argmin(values), values.shape)
        imax = np.unravel_index(np.argmax(values), values.shape)
        return cls(quantity, float(values[imin]), float(values[imax]), complex(pts[imin]),
                   complex(pts[imax]), grid, float(values[-1].max()))

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "inf": self.inf,
            "sup": self.sup,
            "argmin": [abs(self.argmin), math.atan2(self.argmin.imag, self.argmin.real)],
            "argmax": [abs(self.argmax), math.atan2(self.argmax.imag, self.argmax.real)],
            "outer_ring_max": self.outer_ring_max,
            "grid": self.grid.describe(),
        }


def _seq(a) -> CoeffSeq:
    return a.coeffs if isinstance(a, DiagonalKernel) else a


def _check_disk(w) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) >= 1):
        raise ValueError("points must lie in the open unit disk")
    return w


def metric_at(K: DiagonalKernel | CoeffSeq | BivariateKernel, w) -> np.ndarray | float:
    """``h(w) = K(w, w)``; accepts arrays of points."""
    w = _check_disk(w)
    if isinstance(K, BivariateKernel):
        out = _hermitian_eval(K.as_array(), w)
    else:
        out = eval_radial(_seq(K), (w * w.conj()).real).value
    return out[()] if np.ndim(out) == 0 else out


def _hermitian_eval(A: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``sum A[m, n] w^m wbar^n`` summed along diagonals, skipping empty ones.

    With ``x = |w|^2`` this is ``sum_n A[n, n] x^n + 2 Re sum_{d>=1} w^d sum_n A[n+d, n] x^n``.
    """
    x = (w * w.conj()).real
    P = np.polynomial.polynomial
    out = P.polyval(x, np.diagonal(A).real)
    for d in range(1, A.shape[0]):
        diag = np.diagonal(A, -d)
        if np.any(diag):
            out = out + 2 * (w ** d * P.polyval(x, diag)).real
    return out


def curvature_diagonal(a: DiagonalKernel | CoeffSeq, x) -> np.ndarray | float:
    """Curvature ``-d/dwbar (h^-1 dh/dw)`` of ``h(w) = sum a_n |w|^{2n}`` at ``x = |w|^2``.

    Radially, ``-[h'/h + x (h'' h - h'^2) / h^2]`` with primes in ``x``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x >= 1):
        raise ValueError("x = |w|^2 must lie in [0, 1)")
    c = _seq(a).as_array()
    n = np.arange(len(c), dtype=float)
    P = np.polynomial.polynomial
    h = P.polyval(x, c)
    h1 = P.polyval(x, (n * c)[1:]) if len(c) > 1 else np.zeros_like(x)
    h2 = P.polyval(x, (n * (n - 1) * c)[2:]) if len(c) > 2 else np.zeros_like(x)
    if np.any(h <= 0):
        raise ValueError("metric must be positive")
    out = -(h1 / h + x * (h2 * h - h1 ** 2) / h ** 2)
    return out[()] if out.ndim == 0 else out


def curvature_fd(h: Callable, w, step: float = 1e-4) -> np.ndarray | float:
    """Five-point finite-difference curvature ``-(1/4) Laplacian(log h)``.

    Independent of the series formulas; used as their oracle.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) + step >= 1):
        raise ValueError("stencil leaves the unit disk")
    logh = lambda z: np.log(np.asarray(h(z), dtype=float))
    lap = (logh(w + step) + logh(w - step) + logh(w + 1j * step) + logh(w - 1j * step)
           - 4 * logh(w)) / step ** 2
    out = -0.25 * lap
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class JetMetric:
    """``matrix[i, j] = d^{i+j} h / dw^j dwbar^i``."""

    k: int
    point: complex
    matrix: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def _mixed_derivative(a, p: int, q: int, w):
    """``d^{p+q} h / dw^p dwbar^q`` for diagonal or bivariate kernels."""
    if isinstance(a, BivariateKernel):
        return bivariate_derivative_eval(a.as_array(), p, q, w)
    return jet_entry_eval(_seq(a), p, q, w)


def jet_metric(a, w: complex, k: int) -> JetMetric:
    """Metric of the ``k``-jet bundle framed by a section and its derivatives."""
    if k < 0 or k > MAX_JET_ORDER:
        raise ValueError(f"jet order must lie in 0..{MAX_JET_ORDER}")
    if k > a.order:
        raise ValueError(f"jet order {k} exceeds kernel order {a.order}")
    _check_disk(w)
    M = np.empty((k + 1, k + 1), dtype=complex)
    for i in range(k + 1):
        for j in range(i, k + 1):
            M[i, j] = _mixed_derivative(a, j, i, w)
            M[j, i] = np.conj(M[i, j])
        M[i, i] = M[i, i].real
    return JetMetric(k, complex(w), M)


def jet1_trace(a, w):
    """``h(w) + d^2 h / dw dwbar (w)``."""
    w = _check_disk(w)
    out = (_mixed_derivative(a, 0, 0, w) + _mixed_derivative(a, 1, 1, w)).real
    return out[()] if np.ndim(out) == 0 else out


SATISFIED = "hypothesis satisfied on grid"
DEGENERATE = "degenerate: h equals the jet trace (constant section)"
FAILED = "hypothesis fails on grid"


@dataclass(frozen=True)
class JetConditionReport:
    metric: BoundsReport
    trace: BoundsReport
    degenerate_points: int

    @property
    def verdict(self) -> str:
        if not (self.metric.inf > 0 and math.isfinite(self.trace.sup)):
            return FAILED
        if self.degenerate_points:
            return DEGENERATE
        return SATISFIED

    def to_dict(self) -> dict:
        return {"metric": self.metric.to_dict(), "trace": self.trace.to_dict(),
                "degenerate_points": self.degenerate_points, "verdict": self.verdict}


def jet_condition_check(G, grid: GridSpec) -> JetConditionReport:
    """Probe ``c1 <= h(w) < trace J_1(h)(w) <= c2`` over ``grid``.

    ``outer_ring_max`` of the trace report is a true lower bound for the
    supremum over the whole disk, since both ``h`` and ``dd-bar h`` are sums
    of squared moduli of holomorphic functions (subharmonic).
    """
    pts = grid.points()
    h = _mixed_derivative(G, 0, 0, pts).real
    ddbar = _mixed_derivative(G, 1, 1, pts).real
    trace = h + ddbar
    degenerate = int(np.count_nonzero(ddbar <= 1e-14 * np.abs(h)))
    return JetConditionReport(BoundsReport.from_values("h", grid, h),
                              BoundsReport.from_values("trace J1(h)", grid, trace), degenerate)


def metric_ratio_extrema(K_T, K_S, grid: GridSpec) -> BoundsReport:
    """Extrema of ``h_T(w) / h_S(w)`` over the grid."""
    pts = grid.points()
    ratio = np.asarray(metric_at(K_T, pts)) / np.asarray(metric_at(K_S, pts))
    return BoundsReport.from_values("h_T/h_S", grid, ratio)


@dataclass(frozen=True)
class MatrixMetricReport:
    lambda_min_inf: float
    lambda_max_sup: float
    det_inf: float
    det_sup: float
    diag_sup: float
    floor: float
    cap: float

    @property
    def eigen_bounds_hold(self) -> bool:
        """Two-sided eigenvalue bounds ``C1 I <= h <= C2 I`` within [floor, cap]."""
        return self.lambda_min_inf >= self.floor and self.lambda_max_sup <= self.cap

    @property
    def det_bounds_hold(self) -> bool:
        """Bounded frame norms together with a two-sided determinant bound."""
        return self.diag_sup <= self.cap and self.floor <= self.det_inf and self.det_sup <= self.cap

    def to_dict(self) -> dict:
        return {
            "lambda_min_inf": self.lambda_min_inf, "lambda_max_sup": self.lambda_max_sup,
            "det_inf": self.det_inf, "det_sup": self.det_sup, "diag_sup": self.diag_sup,
            "floor": self.floor, "cap": self.cap,
            "eigen_bounds_hold": self.eigen_bounds_hold, "det_bounds_hold": self.det_bounds_hold,
        }


def matrix_metric_bounds(H: np.ndarray, floor: float = 1e-2, cap: float = 1e6) -> MatrixMetricReport:
    """Eigenvalue and determinant extrema of a field of Hermitian matrices.

    ``H`` has shape ``(..., n, n)``.  On a grid nothing is ever literally
    unbounded, so the verdicts compare against ``floor`` and ``cap``.
    """
    H = np.asarray(H)
    if H.ndim < 2 or H.shape[-1] != H.shape[-2]:
        raise ValueError("expected a stack of square matrices")
    H = H.reshape(-1, H.shape[-1], H.shape[-1])
    lam = np.linalg.eigvalsh(H)
    det = np.prod(lam, axis=-1)
    diag = np.real(np.diagonal(H, axis1=-2, axis2=-1))
    return MatrixMetricReport(float(lam[:, 0].min()), float(lam[:, -1].max()), float(det.min()),
                              float(det.max()), float(diag.max()), floor, cap)


def gram_field(frame: Callable[[np.ndarray], np.ndarray], grid: GridSpec) -> np.ndarray:
    """Gram matrices ``h_ij = <gamma_j, gamma_i>`` over the grid.

    ``frame(w)`` returns the frame vectors as columns, shape ``(..., d, n)``.
    """
    F = np.asarray(frame(grid.points()))
    return np.einsum("...ki,...kj->...ij", F.conj(), F)


def trace_curvature_identity_check(g: CoeffSeq | BivariateKernel, grid: GridSpec, step: float = 1e-4,
                                   base: DiagonalKernel | None = None) -> float:
    """Max over the grid of ``|(K_base - K_product) - dd-bar log h_g|``.

    ``K_product`` is the curvature of the kernel whose coefficients are those
    of ``base * g``, computed from the product's own coefficients.
    """
    if base is None:
        base = dirichlet_kernel(1, 200, "float")
    base = base.to_float()
    pts = grid.points()
    x = (pts * pts.conj()).real
    if isinstance(g, BivariateKernel):
        # the product is not radial; both curvatures then share one stencil
        # so that its truncation error cancels in the difference
        G = g.to_float()
        prod = bivariate_product(base, G.truncated(min(G.order, base.order)), base.order)
        k_base = curvature_fd(lambda z: metric_at(base, z), pts, step)
        k_prod = curvature_fd(lambda z: metric_at(prod, z), pts, step)
        h_g = lambda z: metric_at(G, z)
    else:
        gs = g.to_float()
        prod = diag_product(base, gs.padded(max(gs.order, base.order)), base.order)
        k_base = curvature_diagonal(base, x)
        k_prod = curvature_diagonal(prod, x)
        h_g = lambda z: metric_at(gs, z)
    ddbar_log = -curvature_fd(h_g, pts, step)
    return float(np.max(np.abs((k_base - k_prod) - ddbar_log)))


def grid_csv(grid: GridSpec, values: np.ndarray) -> str:
    """Long-format ``r,theta,value`` CSV with a one-line header."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "theta", "value"])
    thetas = grid.thetas
    values = np.asarray(values)
    for i, r in enumerate(grid.radii):
        for j, t in enumerate(thetas):
            writer.writerow([repr(float(r)), repr(float(t)), repr(float(values[i, j]))])
    return buf.getvalue()


def heatmap_csv(grid: GridSpec, values: np.ndarray) -> str:
    """Matrix-format CSV: one row per radius, one column per angle."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r\\theta"] + [repr(float(t)) for t in grid.thetas])
    for r, row in zip(grid.radii, np.asarray(values)):
        writer.writerow([repr(float(r))] + [repr(float(v)) for v in row])
    return buf.getvalue()
