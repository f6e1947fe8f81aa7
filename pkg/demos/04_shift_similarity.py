"""
Weighted shifts, window products and hypercontractions
======================================================

Backward shifts on Hardy and Dirichlet spaces are not similar: their weight
window products drift apart like sqrt(N).  The Dirichlet shift also fails
the hypercontraction sum, each term contributing exactly 1.
"""

from cdjet import (defect_coeffs, dirichlet_kernel, hypercontraction_sum, power_norm, shields_ratio_extrema,
                   szego_kernel, weights_from_kernel)

for N in (100, 10_000, 100_000):
    rep = shields_ratio_extrema(weights_from_kernel(dirichlet_kernel(1, N, "float")),
                                weights_from_kernel(szego_kernel(N, "float")))
    print(f"N = {N:6d}: sup window ratio {rep.sup_ratio:9.3f} at {rep.argmax}  {rep.verdict}")

D = dirichlet_kernel(1, 40)
print("power norms:", [round(power_norm(D, s).norm, 6) for s in (1, 2, 3)])

hc = hypercontraction_sum(dirichlet_kernel(1, 120, "float"), 1, 100)
print(f"hypercontraction partial sum at S = 100: {hc.partial}")

d = defect_coeffs(1, 6)
print("defect coefficients c_k:", [str(c) for c in d.c])
