"""
Dirichlet kernel times inverse squares
======================================

The kernel with coefficients sum_i 1/((i+1)(n-i+1)^2) sits between the
Dirichlet space and its cofactor.  Its scaled coefficients (n+1) a_n rise
above their limit pi^2/6 before settling, which is why the window ratios
against the Dirichlet weights dip under sqrt(6)/pi early on.
"""

import math

import numpy as np

from cdjet import models, dirichlet_kernel, shields_ratio_extrema, weights_from_kernel

N = 100_000
K = models.harmonic_square_closed_form(N)
scaled = np.arange(1, N + 2) * K.coeffs.as_array()

print("(n+1) a_n for the first few n:")
for n in range(0, 13):
    print(f"  n = {n:2d}  {scaled[n]:.6f}")
print(f"peak at n = {int(np.argmax(scaled))}, value {scaled.max():.6f}")
print(f"at n = {N}: {scaled[-1]:.7f}   (pi^2/6 = {math.pi ** 2 / 6:.7f})")

# exact value at the peak
exact = models.harmonic_square_kernel(8)
print("9 a_8 exactly:", 9 * exact[8])

# prefix window ratios are 1/sqrt((n+1) a_n)
rep = shields_ratio_extrema(weights_from_kernel(K), weights_from_kernel(dirichlet_kernel(1, N, "float")))
print(f"prefix ratios range over [{rep.prefix_min:.4f}, {rep.prefix_max:.4f}]")
print(f"all windows: inf {rep.inf_ratio:.4f}, sup {rep.sup_ratio:.4f} -> {rep.verdict}")
