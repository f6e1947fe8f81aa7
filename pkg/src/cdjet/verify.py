"""End-to-end verification of the worked kernels.

Each example runs a list of claims.  A claim records what was expected, what
was computed, the arithmetic mode, the tolerance (0 for exact claims) and its
provenance: ``"stated"`` for values given with the example, ``"derived"`` for
values obtained from an independent computation.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import models
from .geometry import (GridSpec, gram_field, jet_condition_check, jet_metric, matrix_metric_bounds, metric_at,
                       metric_ratio_extrema, trace_curvature_identity_check)
from .kernels import (BivariateKernel, augmented_identity, bivariate_cofactor, dirichlet_kernel, frame_from_gram,
                      psd_check, szego_kernel, PolyFactor)
from .multipliers import (MonomialSymbol, column_operator_norm, fifth_power_family, frame_summability_check,
                          harmonic_family, monomial_mult_norm, mult_norm_bruteforce, row_operator_norm,
                          NOT_SUMMABLE)
from .series import format_scalar
from .shifts import (cofactor_diagonal, mueller_diagonal_check, shields_ratio_extrema, weights_from_kernel)

CONFIG: dict[str, object] = {
    "grid.radii": 24,
    "grid.angles": 64,
    "grid.r_max": 0.999,
    "shields.bound": 10.0,
    "psd.tol": 1e-9,
    "fd.step": 1e-4,
    "fd.r_max": 0.9,
    "power.tol": 1e-8,
    "power.max_iter": 10_000,
    "metric.floor": 1e-2,
    "metric.cap": 1e6,
    "ex4.6.order": 200,
    "ex4.6.grid": (48, 64),
    "ex4.91.order": 100_000,
    "ex4.91.tol": 2e-3,
    "ex4.10.order": 64,
    "ex4.10.frame_terms": 64,
    "ex4.10.bruteforce_N": 2000,
    "ex4.9.order": 60,
    "ex4.9.ratio_order": 3000,
    "ex4.9.frame_tol": 1e-9,
}


@dataclass(frozen=True)
class Claim:
    label: str
    expected: object
    computed: object
    mode: str
    passed: bool
    tolerance: float
    provenance: str

    def to_dict(self) -> dict:
        return {"label": self.label, "expected": _jsonable(self.expected), "computed": _jsonable(self.computed),
                "mode": self.mode, "passed": self.passed, "tolerance": self.tolerance,
                "provenance": self.provenance}


def _jsonable(value):
    if isinstance(value, (Fraction, complex, np.floating, np.complexfloating)):
        return format_scalar(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


@dataclass
class ExampleReport:
    example: str
    claims: list[Claim] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def exact(self, label: str, expected, computed, provenance: str = "stated") -> Claim:
        return self._add(Claim(label, expected, computed, "exact", bool(expected == computed), 0.0, provenance))

    def close(self, label: str, expected: float, computed: float, tol: float, provenance: str = "stated") -> Claim:
        ok = bool(abs(computed - expected) <= tol)
        return self._add(Claim(label, expected, computed, "float", ok, tol, provenance))

    def holds(self, label: str, expected: str, computed, ok: bool, provenance: str = "derived",
              mode: str = "float", tol: float = 0.0) -> Claim:
        return self._add(Claim(label, expected, computed, mode, bool(ok), tol, provenance))

    def _add(self, claim: Claim) -> Claim:
        self.claims.append(claim)
        return claim

    def to_dict(self) -> dict:
        return {"example": self.example, "passed": self.passed, "wall_time": round(self.wall_time, 3),
                "claims": [c.to_dict() for c in self.claims]}


def _grid(cfg: dict, radii_key="grid.radii", angles=None, r_max=None) -> GridSpec:
    return GridSpec.polar(int(cfg[radii_key]), float(r_max or cfg["grid.r_max"]), int(angles or cfg["grid.angles"]))


def _augmented(report: ExampleReport, cfg: dict) -> None:
    N = int(cfg["ex4.6.order"])
    size = N + 2   # diagonal entries up to (N+2, N+2)
    built = models.augmented_dirichlet(size)
    shown = models.augmented_dirichlet_displayed(size)
    report.exact(f"product coefficients match the closed form up to order {size}", True, built == shown)
    n_vals = [0, 1, N]
    report.exact("(n+2, n+2) entry = (4n^2+15n+13)/((n+1)(n+2)(n+3)) for n = 0, 1, N",
                 [Fraction(4 * n * n + 15 * n + 13, (n + 1) * (n + 2) * (n + 3)) for n in n_vals],
                 [built[n + 2, n + 2] for n in n_vals])

    G = augmented_identity(PolyFactor.of(models.QUADRATIC))
    radii, angles = cfg["ex4.6.grid"]
    check = jet_condition_check(G, GridSpec.polar(int(radii), float(cfg["grid.r_max"]), int(angles)))
    report.holds("inf h >= 1 on grid", ">= 1", check.metric.inf, check.metric.inf >= 1, "stated")
    report.holds("sup trace J1(h) <= 19 on grid", "<= 19", check.trace.sup, check.trace.sup <= 19, "stated")
    report.exact("jet condition verdict", "hypothesis satisfied on grid", check.verdict, "derived")

    J = jet_metric(G, 0j, 1)
    report.close("jet metric at 0 equals [[2, 1], [1, 1]]", 0.0,
                 float(np.max(np.abs(J.matrix - np.array([[2, 1], [1, 1]])))), 1e-12, "derived")

    p = PolyFactor.of(models.QUADRATIC, "float")
    dp = p.derivative()
    frame = lambda w: np.stack([np.stack([np.ones_like(w), p(w)], -1),
                                np.stack([np.zeros_like(w), dp(w)], -1)], -1)
    bounds = matrix_metric_bounds(gram_field(frame, GridSpec.polar(24, 0.9, 64)),
                                  float(cfg["metric.floor"]), float(cfg["metric.cap"]))
    report.holds("eigenvalue and determinant verdicts agree (frame and derivative, r <= 0.9)",
                 "agree", [bounds.eigen_bounds_hold, bounds.det_bounds_hold],
                 bounds.eigen_bounds_hold == bounds.det_bounds_hold)

    resid = trace_curvature_identity_check(G, GridSpec.polar(16, float(cfg["fd.r_max"]), 16),
                                           float(cfg["fd.step"]), szego_kernel(200, "float"))
    report.holds("curvature difference = dd-bar log h_g (Szego base)", "< 1e-5", resid, resid < 1e-5, tol=1e-5)


def _inverse_squares(report: ExampleReport, cfg: dict) -> None:
    N = int(cfg["ex4.91.order"])
    tol = float(cfg["ex4.91.tol"])
    K = models.harmonic_square_closed_form(N)
    a = K.coeffs.as_array()
    scaled = np.arange(1, N + 2) * a
    report.close(f"(n+1) a_n at n = {N} -> pi^2/6", models.PI2_6, float(scaled[-1]), tol)
    report.holds(f"sqrt((n+1) a_n) >= 1 for all n <= {N}", ">= 1", float(np.sqrt(scaled.min())),
                 bool(np.all(np.sqrt(scaled) >= 1)), "stated")

    small = 2000
    direct = models.harmonic_square_kernel(small, "float").coeffs.as_array()
    gap = float(np.max(np.abs(direct - a[: small + 1]) / direct))
    report.close(f"closed form matches the Cauchy product up to order {small}", 0.0, gap, 1e-12, "derived")

    shields = shields_ratio_extrema(weights_from_kernel(K), weights_from_kernel(dirichlet_kernel(1, N, "float")),
                                    bound=float(cfg["shields.bound"]))
    report.holds("full-prefix weight ratios lie in [0.77, 1.0]", "[0.77, 1.0]",
                 [shields.prefix_min, shields.prefix_max],
                 0.77 <= shields.prefix_min and shields.prefix_max <= 1.0)
    # the prefix ratio is 1/sqrt((n+1) a_n); (n+1) a_n overshoots its limit near n = 8
    exact = models.harmonic_square_kernel(8)
    report.exact("9 a_8 (largest (n+1) a_n, exact)", Fraction(13371157, 7056000), 9 * exact[8], "derived")
    ratios = 1 / np.sqrt(scaled[1:])
    below = np.flatnonzero(ratios < 0.77) + 1
    last = int(below.max()) if len(below) else 0
    report.holds("prefix ratios lie in [0.77, 1.0] beyond the overshoot", f"n > {last}",
                 [float(ratios[last:].min()), float(ratios[last:].max())],
                 last < N // 2 and 0.77 <= ratios[last:].min() and ratios[last:].max() <= 1.0)
    report.close("prefix ratio at n = N -> sqrt(6)/pi", math.sqrt(6) / math.pi, float(ratios[-1]), 1e-3,
                 "derived")

    frame = frame_summability_check(harmonic_family(200), 1, _grid(cfg), 1.0)
    report.exact("frame family w^(i-1)/i is not multiplier-summable", NOT_SUMMABLE, frame.verdict)


def _fifth_powers(report: ExampleReport, cfg: dict) -> None:
    N = int(cfg["ex4.10.order"])
    K = models.fifth_power_kernel(N)
    report.exact("a_1", Fraction(129, 256), K[1])
    report.exact("a_2", Fraction(515, 1536), K[2])
    report.exact(f"product equals the direct sum over i + j^5 = n up to order {N}", True,
                 K.coeffs == models.fifth_power_kernel_direct(N).coeffs, "derived")

    mueller = mueller_diagonal_check(K, 1)
    report.exact("a_2 - a_1/2 - a_0/3", Fraction(-1, 4), mueller.defects[2])
    report.exact("first negative diagonal defect", "violation at n = 2", mueller.verdict)

    cof = cofactor_diagonal(K, 1)
    report.exact(f"cofactor g_(j^5) = 1/(j+1)^8 up to order {N}", True,
                 cof.g == models.fifth_power_cofactor(N), "derived")

    frame = frame_summability_check(fifth_power_family(int(cfg["ex4.10.frame_terms"])), 1, _grid(cfg), 1.0)
    report.holds("frame lower bound >= 1", ">= 1", frame.lower, frame.lower >= 1)
    bound = math.pi ** 2 / 3
    report.holds("frame upper bound <= pi^2/3", f"<= {bound!r}", frame.upper, frame.upper <= bound + 1e-6,
                 tol=1e-6)

    comps = fifth_power_family(20).components
    exact_ok = all(c.norm_squared_exact() <= Fraction(1, (k + 1) ** 8) + Fraction(1, (k + 1) ** 3)
                   for k, c in enumerate(comps))
    report.exact("||gamma_k||^2 <= 1/(k+1)^8 + 1/(k+1)^3 for k <= 20", True, exact_ok)
    NB = int(cfg["ex4.10.bruteforce_N"])
    worst = max(abs(mult_norm_bruteforce(c, 1, NB, float(cfg["power.tol"]), int(cfg["power.max_iter"]))
                    / monomial_mult_norm(c, 1) - 1) for c in comps if c.degree <= NB // 2)
    report.holds("brute-force norms match the monomial formula (degree <= N/2)", "< 1e-3", worst, worst < 1e-3,
                 tol=1e-3)

    five = fifth_power_family(4).components
    row = row_operator_norm(five, 1, NB)
    col = column_operator_norm(five, 1, NB)
    report.holds("row norm <= sqrt(10) column norm (5 components)", "<= sqrt(10)", row / col,
                 row <= math.sqrt(10) * col)


def _offdiagonal(report: ExampleReport, cfg: dict) -> None:
    N = int(cfg["ex4.9.order"])
    K = models.offdiagonal_kernel(N)   # construction validates Hermitian symmetry exactly
    report.exact("kernel is Hermitian", True, isinstance(K, BivariateKernel), "derived")
    G = bivariate_cofactor(K, dirichlet_kernel(1, N))
    report.exact("cofactor g_00", Fraction(1), G[0, 0], "derived")
    report.exact("cofactor g_11", Fraction(1, 8), G[1, 1], "derived")
    psd = psd_check(G.to_float(), float(cfg["psd.tol"]))
    report.holds(f"cofactor is positive semidefinite at order {N}", "positive", psd.min_eigenvalue, psd.positive)

    frame = frame_from_gram(G.to_float(), 1e-14)
    grid = GridSpec.polar(16, 0.95, 16)
    pts = grid.points()
    via_frame = sum(np.abs(g(pts)) ** 2 for g in frame)
    gap = float(np.max(np.abs(via_frame - metric_at(G.to_float(), pts))))
    report.holds("frame reproduces G(w, w) on grid", "< 1e-9", gap, gap < float(cfg["ex4.9.frame_tol"]),
                 tol=float(cfg["ex4.9.frame_tol"]))

    M = int(cfg["ex4.9.ratio_order"])
    ratio = metric_ratio_extrema(models.offdiagonal_kernel_float(M), dirichlet_kernel(1, M, "float"),
                                 GridSpec.polar(16, 0.99, 16))
    report.holds("metric ratio K / D_1 within [0.9, 4] on r <= 0.99", "[0.9, 4]", [ratio.inf, ratio.sup],
                 0.9 <= ratio.inf and ratio.sup <= 4)


REGISTRY: dict[str, tuple[str, Callable[[ExampleReport, dict], None]]] = {
    "ex4.6": ("Dirichlet kernel augmented by 1 + z + z^2", _augmented),
    "ex4.91": ("Dirichlet kernel times inverse squares", _inverse_squares),
    "ex4.10": ("Dirichlet kernel times fifth-power cofactor", _fifth_powers),
    "ex4.9": ("non-diagonal kernel with 1/(8n) off-diagonal", _offdiagonal),
}


def verify_example(example_id: str, overrides: dict | None = None) -> ExampleReport:
    if example_id not in REGISTRY:
        raise KeyError(f"unknown example {example_id!r}; choose from {', '.join(REGISTRY)}")
    cfg = {**CONFIG, **(overrides or {})}
    report = ExampleReport(example_id)
    start = time.perf_counter()
    REGISTRY[example_id][1](report, cfg)
    report.wall_time = time.perf_counter() - start
    return report
