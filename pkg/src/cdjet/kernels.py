"""Reproducing kernels on the unit disk.

Diagonal kernels ``K(z, w) = sum a_n z^n wbar^n`` are stored as their
coefficient sequence; general kernels ``sum a_{m,n} z^m wbar^n`` as a dense
Hermitian coefficient matrix truncated at some order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np

from .series import (
    CoeffSeq,
    Mode,
    ModeError,
    cauchy_product,
    format_scalar,
    series_reciprocal,
    to_exact,
)


class KernelError(ValueError):
    pass


class KernelFormatError(KernelError):
    """Malformed kernel JSON; ``path`` points at the offending entry."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class DiagonalKernel:
    coeffs: CoeffSeq
    label: str = ""

    def __post_init__(self):
        for n, a in enumerate(self.coeffs):
            if not _is_positive(a):
                raise KernelError(f"coefficient a_{n} = {a} of kernel {self.label!r} is not positive")

    @property
    def order(self) -> int:
        return self.coeffs.order

    @property
    def mode(self) -> Mode:
        return self.coeffs.mode

    def __getitem__(self, n):
        return self.coeffs[n]

    def to_float(self) -> "DiagonalKernel":
        return DiagonalKernel(self.coeffs.to_float(), self.label)

    def truncated(self, order: int) -> "DiagonalKernel":
        return DiagonalKernel(self.coeffs.truncated(order), self.label)


def _is_positive(a) -> bool:
    if isinstance(a, complex) or np.iscomplexobj(a):
        return a.imag == 0 and a.real > 0
    return a > 0


class BivariateKernel:
    """Coefficient matrix ``(a_{m,n})_{0<=m,n<=N}`` with Hermitian symmetry.

    Positivity is *not* enforced here; see :func:`psd_check`.
    """

    __slots__ = ("_rows", "_mode", "label")

    def __init__(self, matrix, mode: Mode | str = Mode.EXACT, label: str = ""):
        mode = Mode(mode)
        if mode is Mode.EXACT:
            rows = tuple(tuple(to_exact(x) for x in row) for row in matrix)
            size = len(rows)
            if any(len(r) != size for r in rows):
                raise KernelError("coefficient matrix must be square")
            for m in range(size):
                for n in range(m + 1):
                    if rows[m][n] != rows[n][m]:
                        raise KernelError(f"not Hermitian at ({m}, {n})")
        else:
            rows = np.array(matrix)
            if np.iscomplexobj(rows) and not np.any(rows.imag):
                rows = rows.real
            rows = rows.astype(np.complex128 if np.iscomplexobj(rows) else np.float64)
            if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
                raise KernelError("coefficient matrix must be square")
            scale = max(1.0, float(np.max(np.abs(rows)))) if rows.size else 1.0
            bad = np.abs(rows - rows.conj().T) > 1e-12 * scale
            if np.any(bad):
                m, n = map(int, np.argwhere(bad)[0])
                raise KernelError(f"not Hermitian at ({m}, {n})")
            rows.setflags(write=False)
        if len(rows) == 0:
            raise KernelError("empty coefficient matrix")
        self._rows = rows
        self._mode = mode
        self.label = label

    @classmethod
    def from_diagonal(cls, kernel: DiagonalKernel | CoeffSeq, label: str | None = None) -> "BivariateKernel":
        seq = kernel.coeffs if isinstance(kernel, DiagonalKernel) else kernel
        N = seq.order
        if seq.mode is Mode.EXACT:
            zero = Fraction(0)
            rows = [[seq[m] if m == n else zero for n in range(N + 1)] for m in range(N + 1)]
            return cls(rows, Mode.EXACT, label or getattr(kernel, "label", ""))
        return cls(np.diag(seq.coeffs), Mode.FLOAT, label or getattr(kernel, "label", ""))

    @property
    def mode(self) -> Mode:
        return self._mode

    @property
    def order(self) -> int:
        return len(self._rows) - 1

    def __getitem__(self, index):
        m, n = index
        return self._rows[m][n]

    def rows(self):
        return self._rows

    def as_array(self) -> np.ndarray:
        if self._mode is Mode.FLOAT:
            return self._rows
        return np.array([[float(x) for x in row] for row in self._rows])

    def to_float(self) -> "BivariateKernel":
        if self._mode is Mode.FLOAT:
            return self
        return BivariateKernel(self.as_array(), Mode.FLOAT, self.label)

    def diagonal(self, offset: int = 0) -> list:
        """Entries ``a_{t+offset, t}`` for ``t = 0..N-offset``."""
        return [self._rows[t + offset][t] for t in range(self.order + 1 - offset)]

    def nonzero(self):
        for m, row in enumerate(self._rows):
            for n, x in enumerate(row):
                if x != 0:
                    yield m, n, x

    def truncated(self, order: int) -> "BivariateKernel":
        if order > self.order:
            raise KernelError(f"order {order} exceeds available order {self.order}")
        if self._mode is Mode.EXACT:
            rows = [row[: order + 1] for row in self._rows[: order + 1]]
        else:
            rows = self._rows[: order + 1, : order + 1]
        return BivariateKernel(rows, self._mode, self.label)

    def __eq__(self, other):
        if not isinstance(other, BivariateKernel) or other.mode is not self.mode:
            return NotImplemented
        if self._mode is Mode.EXACT:
            return self._rows == other._rows
        return bool(np.array_equal(self._rows, other._rows))

    __hash__ = None

    def __repr__(self):
        return f"BivariateKernel({self.label!r}, order={self.order}, mode={self._mode.value})"


@dataclass(frozen=True)
class PolyFactor:
    """Polynomial ``p(z) = sum p_m z^m``."""

    coeffs: CoeffSeq

    def __post_init__(self):
        if self.degree > 0 and self.coeffs[-1] == 0:
            raise KernelError("leading coefficient of a positive-degree polynomial must be nonzero")

    @classmethod
    def of(cls, coeffs, mode: Mode | str = Mode.EXACT) -> "PolyFactor":
        seq = CoeffSeq(coeffs, mode)
        values = list(seq)
        while len(values) > 1 and values[-1] == 0:
            values.pop()
        return cls(CoeffSeq(values, mode))

    @property
    def degree(self) -> int:
        return self.coeffs.order

    @property
    def mode(self) -> Mode:
        return self.coeffs.mode

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        c = self.coeffs.as_array() if self.mode is Mode.EXACT else self.coeffs.coeffs
        return np.polynomial.polynomial.polyval(z, c)

    def derivative(self) -> "PolyFactor":
        if self.degree == 0:
            return PolyFactor.of([0], self.mode)
        return PolyFactor.of([m * self.coeffs[m] for m in range(1, self.degree + 1)], self.mode)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


# ---------------------------------------------------------------------------
# standard families


def _require_exact_exponent(value, what: str) -> int:
    if isinstance(value, float):
        if not value.is_integer():
            raise ModeError(f"exact mode needs an integer {what}; got {value}")
        return int(value)
    q = Fraction(value)
    if q.denominator != 1:
        raise ModeError(f"exact mode needs an integer {what}; got {value}")
    return int(q)


def hk_kernel(k, N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    """Kernel of the space with norm ``sum (n+1)^k |f_n|^2``: ``a_j = (j+1)^(-k)``."""
    mode = Mode(mode)
    if mode is Mode.EXACT:
        k = _require_exact_exponent(k, "exponent k")
        seq = CoeffSeq.exact(Fraction(1, (j + 1) ** k) if k >= 0 else Fraction((j + 1) ** -k) for j in range(N + 1))
    else:
        seq = CoeffSeq.float(np.arange(1, N + 2, dtype=float) ** (-float(k)))
    return DiagonalKernel(seq, f"H_{k}")


def dirichlet_kernel(alpha, N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    """Weighted Dirichlet kernel ``a_j = (j+1)^(-alpha)``, ``alpha in (0, 1]``."""
    if not 0 < float(alpha) <= 1:
        raise KernelError(f"alpha must lie in (0, 1], got {alpha}")
    kernel = hk_kernel(alpha, N, mode)
    return DiagonalKernel(kernel.coeffs, f"D_{alpha}")


def mn_kernel(n: int, N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    """Kernel ``(1 - wbar z)^(-n)``: ``a_j = C(n+j-1, j)``."""
    if int(n) != n or n < 1:
        raise KernelError(f"M_n needs an integer n >= 1, got {n}")
    n = int(n)
    values = [comb(n + j - 1, j) for j in range(N + 1)]
    seq = CoeffSeq(values if Mode(mode) is Mode.EXACT else [float(v) for v in values], mode)
    return DiagonalKernel(seq, f"M_{n}")


def standard_coeffs(family: str, param, N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    """Dispatch on ``family`` in ``{"H_k", "D_alpha", "M_n"}``."""
    builders = {"H_k": hk_kernel, "D_alpha": dirichlet_kernel, "M_n": mn_kernel}
    try:
        builder = builders[family]
    except KeyError:
        raise KernelError(f"unknown kernel family {family!r}; expected one of {sorted(builders)}") from None
    return builder(param, N, mode)


def szego_kernel(N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    return DiagonalKernel(mn_kernel(1, N, mode).coeffs, "szego")


# ---------------------------------------------------------------------------
# products and factorizations


def diag_product(K1: DiagonalKernel, K2: DiagonalKernel | CoeffSeq, N: int | None = None,
                 label: str = "") -> DiagonalKernel:
    """Product of two diagonal kernels (Cauchy product of the coefficients).

    ``K2`` may be a bare non-negative :class:`CoeffSeq` (cofactor sequences
    such as ``(1, 0, 0, ...)`` have zeros); finite sequences are zero-padded.
    """
    seq2 = K2.coeffs if isinstance(K2, DiagonalKernel) else K2
    if N is None:
        N = K1.order
    if seq2.order < N:
        seq2 = seq2.padded(N)
    product = cauchy_product(K1.coeffs, seq2, N)
    name = label or f"{K1.label}*{getattr(K2, 'label', 'g')}"
    return DiagonalKernel(product, name)


def bivariate_product(base: DiagonalKernel | CoeffSeq, G: BivariateKernel, N: int | None = None,
                      label: str = "") -> BivariateKernel:
    """Coefficients of ``base(z, w) * G(z, w)``: ``a_{m,n} = sum_i d_i g_{m-i,n-i}``."""
    d = base.coeffs if isinstance(base, DiagonalKernel) else base
    if d.mode is not G.mode:
        raise ModeError("base and cofactor have different arithmetic modes")
    mode = d.mode
    if N is None:
        N = d.order
    if N > d.order:
        raise KernelError(f"order {N} exceeds base order {d.order}")
    if mode is Mode.EXACT:
        zero = Fraction(0)
        out = [[zero] * (N + 1) for _ in range(N + 1)]
        for u, v, g in G.nonzero():
            for i in range(N + 1 - max(u, v)):
                di = d[i]
                if di:
                    out[u + i][v + i] += di * g
        return BivariateKernel(out, Mode.EXACT, label)
    garr = G.as_array()
    darr = d.as_array()[: N + 1]
    out = np.zeros((N + 1, N + 1), dtype=garr.dtype)
    size = min(G.order, N) + 1
    for u in range(size):
        for v in range(size):
            g = garr[u, v]
            if g == 0:
                continue
            span = N + 1 - max(u, v)
            idx = np.arange(span)
            out[u + idx, v + idx] += darr[:span] * g
    return BivariateKernel(out, Mode.FLOAT, label)


def rank_one_augment(Kdiag: DiagonalKernel, p: PolyFactor, N: int | None = None) -> BivariateKernel:
    """Coefficients of ``Kdiag(z, w) * (1 + p(z) conj(p(w)))``."""
    G = augmented_identity(p, p.degree)
    return bivariate_product(Kdiag, G, N, label=f"{Kdiag.label}*(1+|p|^2)")


def augmented_identity(p: PolyFactor, order: int | None = None) -> BivariateKernel:
    """The coefficient matrix of ``1 + p(z) conj(p(w))``."""
    size = max(p.degree, order or 0) + 1
    if p.mode is Mode.EXACT:
        rows = [[Fraction(0)] * size for _ in range(size)]
        for m in range(p.degree + 1):
            for n in range(p.degree + 1):
                rows[m][n] = p.coeffs[m] * p.coeffs[n]
        rows[0][0] += 1
        return BivariateKernel(rows, Mode.EXACT, "1+|p|^2")
    c = np.zeros(size, dtype=np.result_type(p.coeffs.coeffs, float))
    c[: p.degree + 1] = p.coeffs.coeffs
    rows = np.outer(c, c.conj())
    rows[0, 0] += 1
    return BivariateKernel(rows, Mode.FLOAT, "1+|p|^2")


def bivariate_cofactor(K: BivariateKernel, base: DiagonalKernel, N: int | None = None) -> BivariateKernel:
    """Solve ``K = base * G`` for ``G`` (requires ``base[0] == 1``).

    Works diagonal by diagonal: along each offset the relation is a
    one-variable convolution, ``g_t = a_t - sum_{i>=1} b_i g_{t-i}``.
    """
    if K.mode is not base.mode:
        raise ModeError("kernel and base have different arithmetic modes")
    if base[0] != 1:
        raise KernelError(f"base kernel must have b_0 = 1, got {base[0]}")
    if N is None:
        N = min(K.order, base.order)
    if N > min(K.order, base.order):
        raise KernelError(f"order {N} exceeds available order")
    b = base.coeffs
    if K.mode is Mode.EXACT:
        zero = Fraction(0)
        out = [[zero] * (N + 1) for _ in range(N + 1)]
        for offset in range(N + 1):
            for lower in (True, False) if offset else (True,):
                diag = []
                for t in range(N + 1 - offset):
                    m, n = (t + offset, t) if lower else (t, t + offset)
                    acc = K[m, n]
                    for s, gs in enumerate(diag):
                        if gs:
                            acc -= b[t - s] * gs
                    diag.append(acc)
                    out[m][n] = acc
        return BivariateKernel(out, Mode.EXACT, f"{K.label}/{base.label}")
    arr = K.as_array()[: N + 1, : N + 1]
    recip = series_reciprocal(b.truncated(N)).coeffs
    out = np.zeros_like(arr)
    for offset in range(-N, N + 1):
        diag = np.diagonal(arr, offset=-offset)
        g = np.convolve(recip[: len(diag)], diag)[: len(diag)]
        idx = np.arange(len(diag))
        if offset >= 0:
            out[idx + offset, idx] = g
        else:
            out[idx, idx - offset] = g
    return BivariateKernel(out, Mode.FLOAT, f"{K.label}/{base.label}")


class PsdResult(NamedTuple):
    positive: bool
    min_eigenvalue: float

    @property
    def witness(self) -> float:
        return self.min_eigenvalue


def psd_check(G: BivariateKernel | np.ndarray, tol: float = 1e-9) -> PsdResult:
    """Positive semidefiniteness of a coefficient matrix via its smallest eigenvalue."""
    arr = G.as_array() if isinstance(G, BivariateKernel) else np.asarray(G)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise KernelError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
    if np.any(np.abs(arr - arr.conj().T) > 1e-12 * scale):
        raise KernelError("matrix is not Hermitian")
    lam = float(np.linalg.eigvalsh(arr)[0])
    return PsdResult(lam >= -tol, lam)


class PivotedCholesky(NamedTuple):
    factor: np.ndarray   # L with A[piv][:, piv] ~= L[piv] L[piv]^*, columns by decreasing pivot
    pivots: np.ndarray
    rank: int


def pivoted_cholesky(A: np.ndarray, rel_tol: float = 1e-12) -> PivotedCholesky:
    """Rank-revealing Cholesky ``A = L L^*`` for a Hermitian PSD matrix.

    Stops once the largest remaining diagonal drops below
    ``rel_tol * max(diag(A))``.
    """
    A = np.array(A, dtype=np.result_type(A, float), copy=True)
    n = A.shape[0]
    L = np.zeros_like(A)
    piv = []
    remaining = np.real(np.diag(A)).copy()
    threshold = rel_tol * max(float(np.max(remaining)), 0.0) if n else 0.0
    residual = A
    for k in range(n):
        j = int(np.argmax(remaining))
        pivot = remaining[j]
        if pivot <= threshold or pivot <= 0:
            break
        col = residual[:, j] / np.sqrt(pivot)
        L[:, k] = col
        residual = residual - np.outer(col, col.conj())
        remaining = np.real(np.diag(residual)).copy()
        remaining[piv + [j]] = -np.inf
        piv.append(j)
    rank = len(piv)
    return PivotedCholesky(L[:, :rank], np.array(piv, dtype=int), rank)


def frame_from_gram(G: BivariateKernel, tol: float = 1e-12) -> list[PolyFactor]:
    """Polynomials ``gamma_i`` with ``sum_i gamma_i(z) conj(gamma_i(w)) = G(z, w)``.

    The columns of a pivoted Cholesky factor of the coefficient matrix,
    ordered by decreasing pivot.  ``tol`` is relative to the largest
    diagonal entry; the number of returned components is the numerical rank.
    """
    check = psd_check(G, tol=max(tol, 1e-12) * max(1.0, float(np.max(np.abs(G.as_array())))))
    if not check.positive:
        raise KernelError(f"Gram matrix is indefinite (min eigenvalue {check.min_eigenvalue:.3e})")
    chol = pivoted_cholesky(G.as_array(), rel_tol=tol)
    return [PolyFactor(CoeffSeq.float(_trimmed(col))) for col in chol.factor.T]


def _trimmed(col: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(col)
    return col[: nz[-1] + 1] if len(nz) else col[:1]


# ---------------------------------------------------------------------------
# JSON import/export


def kernel_to_json(kernel: DiagonalKernel | BivariateKernel, indent: int | None = None) -> str:
    if isinstance(kernel, DiagonalKernel):
        payload = {"order": kernel.order, "mode": kernel.mode.value, "label": kernel.label,
                   "diagonal": [format_scalar(a) for a in kernel.coeffs]}
    else:
        payload = {"order": kernel.order, "mode": kernel.mode.value, "label": kernel.label,
                   "matrix": [[format_scalar(x) for x in row] for row in kernel.rows()]}
    return json.dumps(payload, indent=indent)


def _parse_scalar(value, mode: Mode, path: str):
    try:
        if mode is Mode.EXACT:
            if isinstance(value, float):
                raise TypeError("exact kernels need integers or 'p/q' strings, not floats")
            return to_exact(value)
        if isinstance(value, list):
            if len(value) != 2:
                raise TypeError("complex entries are [re, im] pairs")
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return float(Fraction(value))
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeError(f"not a number: {value!r}")
        return float(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise KernelFormatError(path, str(exc)) from None


def kernel_from_json(source: str | dict) -> DiagonalKernel | BivariateKernel:
    """Parse the ``{"order", "mode", "diagonal" | "matrix"}`` kernel format."""
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise KernelFormatError("$", f"invalid JSON: {exc}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise KernelFormatError("$", "expected an object")
    try:
        mode = Mode(data.get("mode", "exact"))
    except ValueError:
        raise KernelFormatError("$.mode", f"expected 'exact' or 'float', got {data.get('mode')!r}") from None
    label = data.get("label", "")
    if ("diagonal" in data) == ("matrix" in data):
        raise KernelFormatError("$", "exactly one of 'diagonal' or 'matrix' is required")
    order = data.get("order")
    if order is not None and (not isinstance(order, int) or isinstance(order, bool) or order < 0):
        raise KernelFormatError("$.order", "must be a non-negative integer")
    if "diagonal" in data:
        diag = data["diagonal"]
        if not isinstance(diag, list) or not diag:
            raise KernelFormatError("$.diagonal", "must be a non-empty list")
        if order is not None and order != len(diag) - 1:
            raise KernelFormatError("$.order", f"is {order} but diagonal has {len(diag)} entries")
        values = [_parse_scalar(v, mode, f"$.diagonal[{i}]") for i, v in enumerate(diag)]
        for i, v in enumerate(values):
            if not _is_positive(v):
                raise KernelFormatError(f"$.diagonal[{i}]", "diagonal kernel coefficients must be positive")
        return DiagonalKernel(CoeffSeq(values, mode), label)
    matrix = data["matrix"]
    if not isinstance(matrix, list) or not matrix:
        raise KernelFormatError("$.matrix", "must be a non-empty list of rows")
    rows = []
    for m, row in enumerate(matrix):
        if not isinstance(row, list) or len(row) != len(matrix):
            raise KernelFormatError(f"$.matrix[{m}]", f"row must have {len(matrix)} entries")
        rows.append([_parse_scalar(v, mode, f"$.matrix[{m}][{n}]") for n, v in enumerate(row)])
    if order is not None and order != len(rows) - 1:
        raise KernelFormatError("$.order", f"is {order} but matrix has {len(rows)} rows")
    try:
        return BivariateKernel(rows, mode, label)
    except KernelError as exc:
        raise KernelFormatError("$.matrix", str(exc)) from None
