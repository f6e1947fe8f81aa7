"""
Adding a rank-one term 1 + z + z^2
==================================

K(z, w) = K_D(z, w) (1 + p(z) conj(p(w))) with p = 1 + z + z^2.  The
cofactor metric is h(w) = 1 + |p(w)|^2 and its first jet trace reaches 19
at w = 1.
"""

from cdjet import GridSpec, jet_condition_check, jet_metric, models
from cdjet.kernels import PolyFactor, augmented_identity
from cdjet.geometry import heatmap_csv, jet1_trace

K = models.augmented_dirichlet(6)
print("a few product entries:")
for m, n in [(0, 0), (1, 1), (2, 2), (2, 0), (3, 1)]:
    print(f"  K[{m},{n}] = {K[m, n]}")

G = augmented_identity(PolyFactor.of(models.QUADRATIC))
print("jet metric at 0:\n", jet_metric(G, 0j, 1).matrix.real)

grid = GridSpec.polar(48, 0.999, 64)
rep = jet_condition_check(G, grid)
print(f"inf h = {rep.metric.inf:.4f}, sup trace = {rep.trace.sup:.4f} at {rep.trace.argmax:.3f}")
print(rep.verdict)

# a coarse heatmap of the trace, ready for any plotting tool
small = GridSpec.polar(4, 0.9, 8)
print(heatmap_csv(small, jet1_trace(G, small.points())))
