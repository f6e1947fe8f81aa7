"""Power-series arithmetic with an explicit arithmetic mode.

Coefficient sequences are either exact (``fractions.Fraction``) or
double-precision (``numpy.float64`` / ``complex128``).  The mode is fixed
when a :class:`CoeffSeq` is built and every operation refuses to mix modes.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, NamedTuple

import numpy as np


class Mode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class ModeError(TypeError):
    """Raised when exact and floating sequences meet in one operation."""


def to_exact(value) -> Fraction:
    """Convert ``value`` to a reduced :class:`Fraction`.

    Accepts integers, rationals and ``"p/q"`` strings.  Floats are refused:
    a binary64 literal such as ``0.1`` is almost never the rational the
    caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact scalar")


def format_scalar(value) -> str | float | list:
    """JSON-friendly form: ``"p/q"`` for exact values, a float (or [re, im]) otherwise."""
    if isinstance(value, Fraction):
        return str(value)
    value = complex(value)
    if value.imag == 0.0:
        return float(value.real)
    return [float(value.real), float(value.imag)]


class CoeffSeq:
    """Finite prefix ``a_0, ..., a_N`` of a coefficient sequence.

    Exact sequences store a tuple of fractions, float sequences a read-only
    numpy array.  Instances are immutable.
    """

    __slots__ = ("_coeffs", "_mode")

    def __init__(self, coeffs: Iterable, mode: Mode | str = Mode.EXACT):
        mode = Mode(mode)
        if mode is Mode.EXACT:
            data = tuple(to_exact(c) for c in coeffs)
        else:
            data = np.array([complex(c) if isinstance(c, complex) else c for c in coeffs])
            if data.dtype == object:
                data = data.astype(complex)
            if np.iscomplexobj(data):
                data = data.astype(np.complex128)
                if not np.any(data.imag):
                    data = data.real.copy()
            else:
                data = data.astype(np.float64)
            data.setflags(write=False)
        if len(data) == 0:
            raise ValueError("a coefficient sequence needs at least a_0")
        self._coeffs = data
        self._mode = mode

    @classmethod
    def exact(cls, coeffs: Iterable) -> "CoeffSeq":
        return cls(coeffs, Mode.EXACT)

    @classmethod
    def float(cls, coeffs: Iterable) -> "CoeffSeq":
        return cls(coeffs, Mode.FLOAT)

    @classmethod
    def delta(cls, order: int = 0, mode: Mode | str = Mode.EXACT) -> "CoeffSeq":
        """The convolution identity ``(1, 0, 0, ...)`` up to ``order``."""
        return cls([1] + [0] * order, mode)

    @property
    def mode(self) -> Mode:
        return self._mode

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self):
        return self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, n):
        return self._coeffs[n]

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffSeq) or other.mode is not self.mode:
            return NotImplemented
        if self.mode is Mode.EXACT:
            return self._coeffs == other._coeffs
        return bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self):
        if self.mode is Mode.EXACT:
            return hash(self._coeffs)
        return hash(self._coeffs.tobytes())

    def __repr__(self) -> str:
        head = ", ".join(str(format_scalar(c)) for c in list(self._coeffs)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"CoeffSeq.{self.mode.value}([{head}{more}], order={self.order})"

    def to_float(self) -> "CoeffSeq":
        if self.mode is Mode.FLOAT:
            return self
        return CoeffSeq.float([float(c) for c in self._coeffs])

    def as_array(self) -> np.ndarray:
        """Float view of the coefficients (a conversion for exact sequences)."""
        if self.mode is Mode.FLOAT:
            return self._coeffs
        return np.array([float(c) for c in self._coeffs])

    def truncated(self, order: int) -> "CoeffSeq":
        if order > self.order:
            raise ValueError(f"order {order} exceeds available order {self.order}")
        return CoeffSeq(self._coeffs[: order + 1], self.mode)

    def padded(self, order: int) -> "CoeffSeq":
        """Extend with zeros (sequences of finite support) up to ``order``."""
        if order <= self.order:
            return self.truncated(order)
        return CoeffSeq(list(self._coeffs) + [0] * (order - self.order), self.mode)

    def scaled(self, factor) -> "CoeffSeq":
        if self.mode is Mode.EXACT:
            factor = to_exact(factor)
            return CoeffSeq.exact(c * factor for c in self._coeffs)
        return CoeffSeq.float(self._coeffs * factor)


def check_same_mode(*seqs: CoeffSeq) -> Mode:
    modes = {s.mode for s in seqs}
    if len(modes) != 1:
        raise ModeError("mixed exact and float sequences; convert explicitly with to_float()")
    return modes.pop()


def _check_order(N: int | None, *seqs: CoeffSeq) -> int:
    available = min(s.order for s in seqs)
    if N is None:
        return available
    if N < 0:
        raise ValueError("order must be non-negative")
    if N > available:
        raise ValueError(f"order {N} exceeds available order {available}")
    return N


def cauchy_product(a: CoeffSeq, b: CoeffSeq, N: int | None = None) -> CoeffSeq:
    """Coefficients ``c_n = sum_{i<=n} a_i b_{n-i}`` for ``n <= N``."""
    mode = check_same_mode(a, b)
    N = _check_order(N, a, b)
    if mode is Mode.FLOAT:
        return CoeffSeq.float(np.convolve(a.coeffs[: N + 1], b.coeffs[: N + 1])[: N + 1])
    out = [Fraction(0)] * (N + 1)
    # sparse-aware: sequences supported on j^5 are mostly zero
    b_support = [(j, bj) for j, bj in enumerate(b.coeffs[: N + 1]) if bj]
    for i, ai in enumerate(a.coeffs[: N + 1]):
        if not ai:
            continue
        for j, bj in b_support:
            if i + j > N:
                break
            out[i + j] += ai * bj
    return CoeffSeq.exact(out)


def series_reciprocal(b: CoeffSeq, N: int | None = None) -> CoeffSeq:
    """Convolution inverse of ``b`` by the forward recursion.

    ``r_0 = 1/b_0`` and ``r_l = -(1/b_0) sum_{j<l} r_j b_{l-j}``; O(N^2).
    """
    N = _check_order(N, b)
    b0 = b[0]
    if b0 == 0:
        raise ZeroDivisionError("b_0 = 0: the series has no reciprocal")
    if b.mode is Mode.FLOAT:
        bs = np.asarray(b.coeffs[: N + 1])
        r = np.zeros(N + 1, dtype=np.result_type(bs, np.float64))
        r[0] = 1.0 / b0
        for l in range(1, N + 1):
            r[l] = -np.dot(r[:l], bs[l:0:-1]) / b0
        return CoeffSeq.float(r)
    bs = b.coeffs[: N + 1]
    inv_b0 = 1 / b0
    r = [inv_b0]
    for l in range(1, N + 1):
        acc = Fraction(0)
        for j in range(l):
            if r[j] and bs[l - j]:
                acc += r[j] * bs[l - j]
        r.append(-acc * inv_b0)
    return CoeffSeq.exact(r)


class RadialValue(NamedTuple):
    value: float
    tail_bound: float


def eval_radial(a: CoeffSeq, x, tail_coeff_bound: float | None = None) -> RadialValue:
    """Evaluate ``sum_{n<=N} a_n x^n`` for ``0 <= x < 1``.

    With ``tail_coeff_bound=C`` the caller asserts ``|a_n| <= C`` beyond the
    stored prefix, and the returned tail bound is ``C x^(N+1) / (1-x)``.
    ``x`` may be an array; the tail bound then has the same shape.
    """
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0) or np.any(xs >= 1):
        raise ValueError("radial argument must lie in [0, 1)")
    coeffs = a.as_array()
    value = np.polynomial.polynomial.polyval(xs, coeffs)
    if tail_coeff_bound is None:
        tail = np.zeros_like(xs)
    else:
        tail = tail_coeff_bound * xs ** (a.order + 1) / (1.0 - xs)
    if xs.ndim == 0:
        return RadialValue(value[()] if isinstance(value, np.ndarray) else value, float(tail))
    return RadialValue(value, tail)


def falling_factorials(n_max: int, k: int) -> np.ndarray:
    """``(n)_k = n (n-1) ... (n-k+1)`` for ``n = 0..n_max`` as floats."""
    n = np.arange(n_max + 1, dtype=float)
    out = np.ones(n_max + 1)
    for j in range(k):
        out *= n - j
    return out


def jet_entry_eval(a: CoeffSeq, i: int, j: int, w) -> complex | np.ndarray:
    """``d^{i+j} h / dw^i dwbar^j`` at ``w`` for ``h(w) = sum a_n |w|^{2n}``.

    Equal to ``sum_{n>=max(i,j)} a_n (n)_i (n)_j w^{n-i} wbar^{n-j}``.
    ``w`` may be an array of points.
    """
    if i < 0 or j < 0:
        raise ValueError("derivative orders must be non-negative")
    if max(i, j) > a.order:
        raise ValueError(f"derivative order exceeds sequence order {a.order}")
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) >= 1):
        raise ValueError("point must lie in the open unit disk")
    coeffs = a.as_array()
    lo = max(i, j)
    N = a.order
    weights = coeffs * falling_factorials(N, i) * falling_factorials(N, j)
    # w^{n-i} wbar^{n-j} = |w|^{2(n-lo)} w^{lo-i} wbar^{lo-j}
    x = (w * w.conj()).real
    radial = np.polynomial.polynomial.polyval(x, weights[lo:])
    out = radial * w ** (lo - i) * w.conj() ** (lo - j)
    return out[()] if out.ndim == 0 else out


def bivariate_derivative_eval(matrix: np.ndarray, p: int, q: int, w) -> np.ndarray:
    """``d^{p+q} / dw^p dwbar^q`` of ``sum_{m,n} A[m, n] w^m wbar^n`` at points ``w``."""
    w = np.asarray(w, dtype=complex)
    flat = w.reshape(-1)
    size = matrix.shape[0]
    idx = np.arange(size)
    fp = falling_factorials(size - 1, p)
    fq = falling_factorials(size - 1, q)
    ep = np.clip(idx - p, 0, None)
    eq = np.clip(idx - q, 0, None)
    U = fp[None, :] * flat[:, None] ** ep[None, :]
    V = fq[None, :] * flat.conj()[:, None] ** eq[None, :]
    out = np.einsum("pm,mn,pn->p", U, matrix, V)
    return out.reshape(w.shape)
