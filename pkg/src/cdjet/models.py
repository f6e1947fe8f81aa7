"""Constructors for the worked kernels, each built two ways where possible.

The "displayed" functions write the coefficients down directly from their
closed forms.  The "constructed" functions assemble the same kernel as a
product of a Dirichlet kernel with a cofactor.  Agreement of the two is what
the verification registry checks.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .kernels import (BivariateKernel, DiagonalKernel, PolyFactor, diag_product, dirichlet_kernel,
                      rank_one_augment)
from .series import CoeffSeq, Mode

QUADRATIC = (1, 1, 1)   # p(z) = 1 + z + z^2


# -- rank-one augmentation of the Dirichlet kernel by 1 + z + z^2 ------------

def augmented_dirichlet(N: int, mode: Mode | str = Mode.EXACT) -> BivariateKernel:
    """``D_1(z, w) (1 + p(z) conj(p(w)))`` with ``p = 1 + z + z^2``, to order ``N``."""
    return rank_one_augment(dirichlet_kernel(1, N, mode), PolyFactor.of(QUADRATIC, mode), N)


def augmented_dirichlet_displayed(N: int) -> BivariateKernel:
    """The same kernel from its closed-form entries (exact)."""
    A = [[Fraction(0)] * (N + 1) for _ in range(N + 1)]

    def put(m, n, v):
        if m <= N and n <= N:
            A[m][n] = A[n][m] = Fraction(v)

    put(0, 0, 2)
    put(1, 0, 1)
    put(1, 1, 2)
    for n in range(1, N):
        put(n + 1, n, Fraction(2 * n + 1, n * (n + 1)))
    for n in range(N - 1):
        put(n + 2, n, Fraction(1, n + 1))
        put(n + 2, n + 2, Fraction(4 * n * n + 15 * n + 13, (n + 1) * (n + 2) * (n + 3)))
    return BivariateKernel(A, Mode.EXACT, "augmented Dirichlet (closed form)")


# -- Dirichlet times sum |w|^{2n}/(n+1)^2 ------------------------------------

def inverse_square_cofactor(N: int, mode: Mode | str = Mode.EXACT) -> CoeffSeq:
    """``g_n = 1/(n+1)^2``."""
    if Mode(mode) is Mode.EXACT:
        return CoeffSeq.exact(Fraction(1, (n + 1) ** 2) for n in range(N + 1))
    return CoeffSeq.float(1.0 / np.arange(1, N + 2, dtype=float) ** 2)


def harmonic_square_kernel(N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    """``a_n = sum_{i<=n} 1/((i+1)(n-i+1)^2)`` as a Cauchy product; O(N^2)."""
    return diag_product(dirichlet_kernel(1, N, mode), inverse_square_cofactor(N, mode), N,
                        label="Dirichlet x inverse squares")


def harmonic_square_closed_form(N: int) -> DiagonalKernel:
    """Float coefficients of :func:`harmonic_square_kernel` in O(N).

    Partial fractions give
    ``1/(k (m-k)^2) = 1/(m^2 k) + 1/(m^2 (m-k)) + 1/(m (m-k)^2)`` with
    ``m = n + 2``, hence ``a_n = 2 H_{n+1} / (n+2)^2 + S_{n+1} / (n+2)``
    where ``H`` and ``S`` are partial sums of ``1/j`` and ``1/j^2``.
    """
    j = np.arange(1, N + 2, dtype=float)
    H = np.cumsum(1.0 / j)
    S = np.cumsum(1.0 / j ** 2)
    m = j + 1
    return DiagonalKernel(CoeffSeq.float(2 * H / m ** 2 + S / m), "Dirichlet x inverse squares")


# -- Dirichlet times sum |w|^{2 j^5}/(j+1)^8 ---------------------------------

def fifth_power_cofactor(N: int, mode: Mode | str = Mode.EXACT) -> CoeffSeq:
    """``g_{j^5} = 1/(j+1)^8`` and zero elsewhere."""
    g = [0] * (N + 1)
    j = 0
    while j ** 5 <= N:
        g[j ** 5] = Fraction(1, (j + 1) ** 8)
        j += 1
    if Mode(mode) is Mode.FLOAT:
        g = [float(x) for x in g]
    return CoeffSeq(g, mode)


def fifth_power_kernel(N: int, mode: Mode | str = Mode.EXACT) -> DiagonalKernel:
    """``a_n = sum_{i + j^5 = n} 1/((i+1)(j+1)^8)``."""
    return diag_product(dirichlet_kernel(1, N, mode), fifth_power_cofactor(N, mode), N,
                        label="Dirichlet x fifth powers")


def fifth_power_kernel_direct(N: int) -> DiagonalKernel:
    """The same coefficients summed directly over ``i + j^5 = n`` (exact)."""
    a = []
    for n in range(N + 1):
        total = Fraction(0)
        j = 0
        while j ** 5 <= n:
            total += Fraction(1, (n - j ** 5 + 1) * (j + 1) ** 8)
            j += 1
        a.append(total)
    return DiagonalKernel(CoeffSeq.exact(a), "fifth powers (direct)")


# -- a non-diagonal kernel with off-diagonal entries 1/(8n) -------------------

def offdiagonal_kernel(N: int) -> BivariateKernel:
    """Exact kernel with ``a_00 = 1``, ``a_11 = 5/8``, ``a_{n+1,n} = 1/(8n)`` and
    ``a_nn = sum_{i=1}^{n+1} 1/(i (n+2-i)^3) + 1/(8(n-1))`` for ``n >= 2``."""
    A = [[Fraction(0)] * (N + 1) for _ in range(N + 1)]
    A[0][0] = Fraction(1)
    if N >= 1:
        A[1][1] = Fraction(5, 8)
    for n in range(1, N):
        A[n + 1][n] = A[n][n + 1] = Fraction(1, 8 * n)
    for n in range(2, N + 1):
        A[n][n] = sum(Fraction(1, i * (n + 2 - i) ** 3) for i in range(1, n + 2)) + Fraction(1, 8 * (n - 1))
    return BivariateKernel(A, Mode.EXACT, "off-diagonal example")


def offdiagonal_kernel_float(N: int) -> BivariateKernel:
    """Float version of :func:`offdiagonal_kernel`, for orders where fractions are too slow."""
    A = np.zeros((N + 1, N + 1))
    A[0, 0] = 1.0
    if N >= 1:
        A[1, 1] = 5 / 8
    n = np.arange(1, N)
    A[n + 1, n] = A[n, n + 1] = 1 / (8 * n)
    for k in range(2, N + 1):
        i = np.arange(1, k + 2, dtype=float)
        A[k, k] = math.fsum(1 / (i * (k + 2 - i) ** 3)) + 1 / (8 * (k - 1))
    return BivariateKernel(A, Mode.FLOAT, "off-diagonal example")


PI2_6 = math.pi ** 2 / 6
