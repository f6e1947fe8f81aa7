"""Multiplier norms on the weighted Dirichlet spaces ``D_alpha``.

The space ``D_alpha`` has kernel coefficients ``(n+1)^-alpha``, so
``e_n = z^n / (n+1)^(alpha/2)`` is an orthonormal basis and multiplication by
``z^m`` sends ``e_n`` to ``((n+m+1)/(n+1))^(alpha/2) e_{n+m}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .geometry import GridSpec
from .kernels import PolyFactor
from .series import to_exact


class ConvergenceError(ArithmeticError):
    def __init__(self, iterations: int, last_change: float):
        super().__init__(f"power iteration did not converge after {iterations} iterations "
                         f"(last change {last_change:.3e})")
        self.iterations = iterations
        self.last_change = last_change


@dataclass(frozen=True)
class MonomialSymbol:
    """``phi(z) = coefficient * z^degree``."""

    coefficient: Fraction | float | complex
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")

    def __call__(self, z):
        return complex(self.coefficient) * np.asarray(z, dtype=complex) ** self.degree

    def norm_squared_exact(self) -> Fraction:
        """``|c|^2 (m+1)``, the squared norm on ``D_1``, for rational ``c``."""
        c = to_exact(self.coefficient)
        return c * c * (self.degree + 1)


Symbol = MonomialSymbol | PolyFactor | Sequence


def _terms(p: Symbol) -> list[tuple[int, complex]]:
    """Nonzero ``(degree, coefficient)`` pairs of a symbol."""
    if isinstance(p, MonomialSymbol):
        pairs = [(p.degree, complex(p.coefficient))]
    elif isinstance(p, PolyFactor):
        pairs = list(enumerate(complex(c) for c in p.coeffs))
    else:
        pairs = list(enumerate(complex(c) if not isinstance(c, Fraction) else complex(float(c)) for c in p))
    return [(m, c) for m, c in pairs if c != 0]


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


def monomial_mult_norm(phi: MonomialSymbol, alpha) -> float:
    """``|c| (m+1)^(alpha/2)``: the ratio ``((n+m+1)/(n+1))^(alpha/2)`` is largest at ``n = 0``."""
    alpha = _check_alpha(alpha)
    return abs(complex(phi.coefficient)) * (phi.degree + 1) ** (alpha / 2)


def poly_mult_norm_upper(p: Symbol, alpha) -> float:
    """Triangle-inequality bound ``sum_m |p_m| (m+1)^(alpha/2)``."""
    alpha = _check_alpha(alpha)
    return math.fsum(abs(c) * (m + 1) ** (alpha / 2) for m, c in _terms(p))


class _TruncatedMultiplier:
    """Multiplication by a symbol compressed to ``span(e_0..e_N)``."""

    def __init__(self, p: Symbol, alpha: float, N: int):
        self.terms = [(m, c) for m, c in _terms(p) if m <= N]
        self.N = N
        self.weight = np.arange(1, N + 2, dtype=float) ** (alpha / 2)
        self.complex = any(c.imag for _, c in self.terms)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        u = v / self.weight
        out = np.zeros(self.N + 1, dtype=np.result_type(v, complex if self.complex else float))
        for m, c in self.terms:
            out[m:] += (c if self.complex else c.real) * u[: self.N + 1 - m]
        return out * self.weight

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        u = v * self.weight
        out = np.zeros(self.N + 1, dtype=np.result_type(v, complex if self.complex else float))
        for m, c in self.terms:
            out[: self.N + 1 - m] += (c.conjugate() if self.complex else c.real) * u[m:]
        return out / self.weight


def _top_singular_value(apply_gram: Callable[[np.ndarray], np.ndarray], size: int,
                        tol: float, max_iter: int) -> float:
    """Power iteration on a PSD Gram operator, seeded with the all-ones vector."""
    v = np.ones(size) / math.sqrt(size)
    sigma = 0.0
    change = math.inf
    for _ in range(max_iter):
        w = apply_gram(v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        new_sigma = math.sqrt(norm)
        change = abs(new_sigma - sigma)
        sigma = new_sigma
        v = w / norm
        if change < tol:
            return sigma
    raise ConvergenceError(max_iter, change)


def mult_norm_bruteforce(p: Symbol, alpha, N: int, tol: float = 1e-8, max_iter: int = 10_000) -> float:
    """Spectral norm of the ``(N+1) x (N+1)`` multiplication matrix.

    Entries ``M[m, n] = p_{m-n} ((m+1)/(n+1))^(alpha/2)``; power iteration on
    ``M^H M``.  Truncation only ever lowers the norm, so this approaches the
    multiplier norm from below as ``N`` grows.
    """
    alpha = _check_alpha(alpha)
    if N < 0:
        raise ValueError("truncation must be non-negative")
    M = _TruncatedMultiplier(p, alpha, N)
    if not M.terms:
        return 0.0
    return _top_singular_value(lambda v: M.rmatvec(M.matvec(v)), N + 1, tol, max_iter)


def column_operator_norm(components: Iterable[Symbol], alpha, N: int, tol: float = 1e-8,
                         max_iter: int = 10_000) -> float:
    """Truncated norm of ``f -> (phi_1 f, phi_2 f, ...)``."""
    alpha = _check_alpha(alpha)
    ops = [_TruncatedMultiplier(p, alpha, N) for p in components]
    gram = lambda v: sum(M.rmatvec(M.matvec(v)) for M in ops)
    return _top_singular_value(gram, N + 1, tol, max_iter)


def row_operator_norm(components: Iterable[Symbol], alpha, N: int, tol: float = 1e-8,
                      max_iter: int = 10_000) -> float:
    """Truncated norm of ``(f_1, f_2, ...) -> sum phi_i f_i``."""
    alpha = _check_alpha(alpha)
    ops = [_TruncatedMultiplier(p, alpha, N) for p in components]
    gram = lambda v: sum(M.matvec(M.rmatvec(v)) for M in ops)
    return _top_singular_value(gram, N + 1, tol, max_iter)


@dataclass(frozen=True)
class MonomialFamily:
    """A truncated frame family with an explicit bound on the omitted tail.

    ``tail_bound`` bounds ``sum ||gamma_i||^2_Mult`` over the omitted
    components; ``inf`` means no finite bound exists.
    """

    rule: str
    components: tuple[MonomialSymbol, ...]
    tail_bound: float


def fifth_power_family(K: int) -> MonomialFamily:
    """``gamma_k = w^(k^5) / (k+1)^4`` for ``k = 0..K``.

    On ``D_1``, ``||gamma_k||^2 = (k^5+1)/(k+1)^8 <= 1/(k+1)^8 + 1/(k+1)^3
    <= 2/(k+1)^2``, so the omitted tail is at most
    ``sum_{k>K} 2/(k+1)^2 <= 2/(K+1)``.
    """
    comps = tuple(MonomialSymbol(Fraction(1, (k + 1) ** 4), k ** 5) for k in range(K + 1))
    return MonomialFamily("w^(k^5)/(k+1)^4", comps, 2.0 / (K + 1))


def harmonic_family(K: int) -> MonomialFamily:
    """``gamma_i = w^(i-1) / i`` for ``i = 1..K``; on ``D_1`` the norms squared are ``1/i``."""
    comps = tuple(MonomialSymbol(Fraction(1, i), i - 1) for i in range(1, K + 1))
    return MonomialFamily("w^(i-1)/i", comps, math.inf)


SUMMABLE = "hypothesis satisfied"
NOT_SUMMABLE = "hypothesis NOT satisfied"


@dataclass(frozen=True)
class FrameSummabilityReport:
    lower: float
    upper: float
    delta_target: float
    components: int
    tail_bound: float
    normalization: str = "none (column norm not rescaled to 1)"

    @property
    def verdict(self) -> str:
        if self.lower >= self.delta_target and math.isfinite(self.upper):
            return SUMMABLE
        return NOT_SUMMABLE

    def to_dict(self) -> dict:
        finite = lambda x: x if math.isfinite(x) else "inf"
        return {"lower": self.lower, "upper": finite(self.upper), "delta_target": self.delta_target,
                "components": self.components, "tail_bound": finite(self.tail_bound),
                "normalization": self.normalization, "verdict": self.verdict}


def frame_summability_check(components: Sequence[Symbol] | MonomialFamily, alpha, grid: GridSpec,
                            delta_target: float, tail_bound: float = 0.0) -> FrameSummabilityReport:
    """Pointwise lower bound and summed multiplier-norm upper bound of a frame.

    ``lower`` is the grid infimum of ``sum |gamma_i(w)|^2`` (the grid always
    contains ``w = 0`` when its first radius is 0).  ``upper`` adds the
    squared per-component upper bounds and ``tail_bound``.  Omitted
    components only increase the pointwise sum, so ``lower`` stays valid.
    """
    if isinstance(components, MonomialFamily):
        tail_bound = components.tail_bound
        components = components.components
    if not components:
        raise ValueError("frame has no components")
    pts = grid.points()
    total = np.zeros(pts.shape)
    for p in components:
        if isinstance(p, MonomialSymbol):
            total += np.abs(p(pts)) ** 2
        else:
            total += np.abs(np.polynomial.polynomial.polyval(pts, [c for _, c in _dense(p)])) ** 2
    upper = math.fsum(poly_mult_norm_upper(p, alpha) ** 2 for p in components) + tail_bound
    return FrameSummabilityReport(float(total.min()), upper, float(delta_target), len(components),
                                  float(tail_bound))


def _dense(p: Symbol) -> list[tuple[int, complex]]:
    terms = dict(_terms(p))
    top = max(terms, default=0)
    return [(m, terms.get(m, 0j)) for m in range(top + 1)]
