"""
A cofactor supported on fifth powers
====================================

Multiplying the Dirichlet kernel by g(x) = sum_j x^(j^5)/(j+1)^8 gives a
kernel whose diagonal defect goes negative at n = 2, while its frame
w^(k^5)/(k+1)^4 still has summable multiplier norms.
"""

import math

from cdjet import GridSpec, cofactor_diagonal, models, mueller_diagonal_check
from cdjet.multipliers import fifth_power_family, frame_summability_check, harmonic_family

K = models.fifth_power_kernel(64)
print("first coefficients:", [str(K[n]) for n in range(4)])

m = mueller_diagonal_check(K, 1)
print("diagonal defects:", [str(d) for d in list(m.defects)[:4]], "->", m.verdict)

g = cofactor_diagonal(K, 1).g
print("nonzero cofactor entries:", {n: str(v) for n, v in enumerate(g) if v})

grid = GridSpec.polar(24, 0.999, 64)
good = frame_summability_check(fifth_power_family(64), 1, grid, 1.0)
print(f"fifth-power frame: lower {good.lower:.4f}, upper {good.upper:.4f} "
      f"(pi^2/3 = {math.pi ** 2 / 3:.4f}), tail <= {good.tail_bound:.4f} -> {good.verdict}")

# the frame w^(i-1)/i has norms squared 1/i: no finite bound
bad = frame_summability_check(harmonic_family(64), 1, grid, 1.0)
print(f"harmonic frame -> {bad.verdict}")
