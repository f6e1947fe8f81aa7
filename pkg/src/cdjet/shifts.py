"""Weighted backward shifts realized by diagonal kernels.

On a space with diagonal kernel ``sum a_n z^n wbar^n`` the adjoint of
multiplication by ``z`` is the weighted backward shift with weights
``sqrt(a_{n-1} / a_n)``.  Everything here works from the coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .kernels import DiagonalKernel, dirichlet_kernel
from .series import CoeffSeq, Mode, ModeError, cauchy_product, format_scalar, series_reciprocal

CONSISTENT = "consistent with similarity"
EXCLUDED = "similarity excluded"


@dataclass(frozen=True)
class WeightSequence:
    weights: np.ndarray  # weights[n-1] is the weight alpha_n
    source: str = ""

    def __post_init__(self):
        if np.any(~(self.weights > 0)):
            raise ValueError("weights must be positive")

    def __len__(self):
        return len(self.weights)

    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.weights) <= 0))


def _ratios(K: DiagonalKernel, shift: int = 1, N: int | None = None) -> np.ndarray:
    """``a_{i-shift} / a_i`` for ``i = shift..N``, computed exactly when possible."""
    N = K.order if N is None else N
    if N > K.order:
        raise ValueError(f"order {N} exceeds kernel order {K.order}")
    if K.mode is Mode.EXACT:
        return np.array([float(K[i - shift] / K[i]) for i in range(shift, N + 1)])
    a = K.coeffs.coeffs
    return a[: N + 1 - shift] / a[shift: N + 1]


def weights_from_kernel(K: DiagonalKernel, N: int | None = None) -> WeightSequence:
    """``alpha_n = sqrt(a_{n-1} / a_n)`` for ``n = 1..N``."""
    return WeightSequence(np.sqrt(_ratios(K, 1, N)), K.label)


@dataclass(frozen=True)
class ShieldsReport:
    inf_ratio: float
    sup_ratio: float
    argmin: tuple[int, int]
    argmax: tuple[int, int]
    horizon: int
    bound: float
    prefix_min: float
    prefix_max: float
    monotone: tuple[bool, bool]

    @property
    def verdict(self) -> str:
        if self.sup_ratio > self.bound or self.inf_ratio < 1.0 / self.bound:
            return EXCLUDED
        return CONSISTENT

    def to_dict(self) -> dict:
        return {
            "inf": self.inf_ratio,
            "sup": self.sup_ratio,
            "witness_k": self.argmax[0],
            "witness_l": self.argmax[1],
            "inf_witness_k": self.argmin[0],
            "inf_witness_l": self.argmin[1],
            "horizon": self.horizon,
            "bound": self.bound,
            "prefix_min": self.prefix_min,
            "prefix_max": self.prefix_max,
            "weights_nonincreasing": list(self.monotone),
            "verdict": self.verdict,
        }


def shields_ratio_extrema(A: WeightSequence, B: WeightSequence, N: int | None = None,
                          bound: float = 10.0) -> ShieldsReport:
    """Extrema of ``prod_{i=k..l} alpha_i / beta_i`` over ``1 <= k <= l <= N``.

    Uses prefix log-sums and suffix running extrema (O(N)).  A finite horizon
    can only ever exclude similarity: ratios outside ``[1/bound, bound]``
    certify that no uniform constants exist.
    """
    if N is None:
        N = min(len(A), len(B))
    if N <= 0:
        raise ValueError("horizon must be positive")
    if len(A) < N or len(B) < N:
        raise ValueError(f"weight sequences are shorter than the horizon {N}")
    logs = np.log(A.weights[:N]) - np.log(B.weights[:N])
    S = np.concatenate(([0.0], np.cumsum(logs)))

    # best l >= k for each k; ties go to the smallest l
    suf_max = np.empty(N + 1)
    suf_max_at = np.empty(N + 1, dtype=int)
    suf_min = np.empty(N + 1)
    suf_min_at = np.empty(N + 1, dtype=int)
    hi, hi_at, lo, lo_at = -math.inf, N, math.inf, N
    Sl = S.tolist()
    for l in range(N, 0, -1):
        if Sl[l] >= hi:
            hi, hi_at = Sl[l], l
        if Sl[l] <= lo:
            lo, lo_at = Sl[l], l
        suf_max[l], suf_max_at[l] = hi, hi_at
        suf_min[l], suf_min_at[l] = lo, lo_at

    up = suf_max[1:] - S[:-1]
    down = suf_min[1:] - S[:-1]
    k_up = int(np.argmax(up)) + 1       # argmax/argmin return the first (smallest k)
    k_down = int(np.argmin(down)) + 1
    prefix = np.exp(S[1:])
    return ShieldsReport(
        inf_ratio=float(math.exp(down[k_down - 1])),
        sup_ratio=float(math.exp(up[k_up - 1])),
        argmin=(k_down, int(suf_min_at[k_down])),
        argmax=(k_up, int(suf_max_at[k_up])),
        horizon=N,
        bound=bound,
        prefix_min=float(prefix.min()),
        prefix_max=float(prefix.max()),
        monotone=(A.is_nonincreasing(), B.is_nonincreasing()),
    )


class PowerNorm(NamedTuple):
    norm: float
    attained_at: int
    boundary: bool   # sup attained at the truncation edge: inconclusive


def power_norm(K: DiagonalKernel, s: int, N: int | None = None) -> PowerNorm:
    """``||T^s|| = sup_{i>=s} sqrt(a_{i-s} / a_i)`` over the stored prefix."""
    N = K.order if N is None else N
    if s < 1 or s > N:
        raise ValueError(f"power s={s} must satisfy 1 <= s <= N={N}")
    r = _ratios(K, s, N)
    j = int(np.argmax(r))
    i = j + s
    return PowerNorm(float(np.sqrt(r[j])), i, i == N)


@dataclass(frozen=True)
class HypercontractionReport:
    partial: float
    summands: np.ndarray = field(repr=False)
    diverging: bool
    exceeds_one: bool
    boundary_terms: int

    @property
    def note(self) -> str:
        if self.exceeds_one:
            return "partial sum exceeds 1: hypothesis fails (truncated norms are lower bounds)"
        if self.diverging:
            return "summands decay no faster than 1/s: heuristic divergence, no finite certificate"
        return "no finite certificate"


def hypercontraction_sum(K: DiagonalKernel, alpha: float, S: int, N: int | None = None) -> HypercontractionReport:
    """Partial sum of ``||T^s||^2 / (s+1)^alpha`` for ``s = 1..S``.

    The divergence flag compares the last ten summands with the harmonic
    series (``s * t_s >= 1/2``); it is a heuristic, reported as such.
    """
    N = K.order if N is None else N
    if S > N:
        raise ValueError(f"S={S} exceeds order N={N}")
    terms = np.empty(S)
    boundary = 0
    for s in range(1, S + 1):
        pn = power_norm(K, s, N)
        terms[s - 1] = pn.norm ** 2 / (s + 1) ** alpha
        boundary += pn.boundary
    partial = float(math.fsum(terms))
    tail = np.arange(max(1, S - 9), S + 1)
    diverging = S >= 10 and bool(np.all(tail * terms[tail - 1] >= 0.5))
    return HypercontractionReport(partial, terms, diverging, partial > 1.0, boundary)


@dataclass(frozen=True)
class DefectCoeffs:
    alpha: float
    b: CoeffSeq
    c: CoeffSeq

    def convolution(self) -> CoeffSeq:
        return cauchy_product(self.b, self.c)

    def identity_residual(self) -> float:
        conv = self.convolution()
        target = np.zeros(len(conv))
        target[0] = 1.0
        return float(np.max(np.abs(conv.as_array() - target)))


def _dirichlet_seq(alpha, N: int, mode: Mode | str) -> CoeffSeq:
    if Mode(mode) is Mode.EXACT and Fraction(alpha) != 1:
        raise ModeError(f"exact mode needs alpha = 1 (got {alpha}); use float mode")
    return dirichlet_kernel(alpha, N, mode).coeffs


def defect_coeffs(alpha, N: int, mode: Mode | str = Mode.EXACT) -> DefectCoeffs:
    """``b_k = (k+1)^-alpha`` and its convolution inverse ``c``.

    Checks ``c_0 = 1`` and ``-b_k <= c_k <= 0`` before returning.
    """
    b = _dirichlet_seq(alpha, N, mode)
    c = series_reciprocal(b)
    slack = 0 if b.mode is Mode.EXACT else 1e-12
    if c[0] != 1:
        raise ArithmeticError("c_0 != 1")
    for k in range(1, N + 1):
        if not (-b[k] - slack <= c[k] <= slack):
            raise ArithmeticError(f"bound -b_k <= c_k <= 0 violated at k={k}: c_k={c[k]}")
    return DefectCoeffs(float(alpha), b, c)


@dataclass(frozen=True)
class MuellerReport:
    alpha: float
    defects: CoeffSeq
    first_violation: int | None

    @property
    def verdict(self) -> str:
        if self.first_violation is None:
            return "no violation up to order %d" % self.defects.order
        return f"violation at n = {self.first_violation}"

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "defects": [format_scalar(d) for d in self.defects],
                "first_violation": self.first_violation, "verdict": self.verdict}


def mueller_diagonal_check(K: DiagonalKernel, alpha, N: int | None = None) -> MuellerReport:
    """Diagonal entries ``a_n - sum_{s=1..n} a_{n-s} / (s+1)^alpha``.

    These must all be non-negative when ``sum_s ||T^s||^2 / (s+1)^alpha <= 1``.
    """
    N = K.order if N is None else N
    b = _dirichlet_seq(alpha, N, K.mode)
    a = K.coeffs.truncated(N)
    conv = cauchy_product(b, a)
    # b_0 = 1, so the s >= 1 part of the sum is conv - a
    if a.mode is Mode.EXACT:
        d = CoeffSeq.exact(2 * x - y for x, y in zip(a, conv))
    else:
        d = CoeffSeq.float(2 * a.coeffs - conv.coeffs)
    first = next((n for n, x in enumerate(d) if x < 0), None)
    return MuellerReport(float(alpha), d, first)


@dataclass(frozen=True)
class CofactorReport:
    g: CoeffSeq
    normalized: CoeffSeq   # g_n / a_n, the diagonal of the squared defect
    negative_at: tuple[int, ...]

    @property
    def message(self) -> str:
        if not self.negative_at:
            return "defect diagonal non-negative"
        return (f"defect not positive at n = {self.negative_at[0]}"
                " - tensor splitting over D_alpha fails at this order")


def cofactor_diagonal(K: DiagonalKernel, alpha, N: int | None = None) -> CofactorReport:
    """``g = c * a`` with ``c`` the inverse of the ``D_alpha`` coefficients, so ``K = D_alpha * g``."""
    N = K.order if N is None else N
    b = _dirichlet_seq(alpha, N, K.mode)
    a = K.coeffs.truncated(N)
    g = cauchy_product(series_reciprocal(b), a)
    if a.mode is Mode.EXACT:
        normalized = CoeffSeq.exact(x / y for x, y in zip(g, a))
    else:
        normalized = CoeffSeq.float(g.coeffs / a.coeffs)
    floor = 0 if a.mode is Mode.EXACT else -1e-12 * float(np.max(np.abs(a.coeffs)))
    negative = tuple(n for n, x in enumerate(g) if x < floor)
    return CofactorReport(g, normalized, negative)
