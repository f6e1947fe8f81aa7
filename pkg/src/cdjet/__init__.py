"""Coefficient-level tools for diagonal and non-diagonal reproducing kernels.

Power series in exact or float arithmetic, weighted backward shifts, line
bundle metrics and curvatures, jet metrics and multiplier norms on weighted
Dirichlet spaces.
"""

from .series import CoeffSeq, Mode, ModeError, cauchy_product, eval_radial, jet_entry_eval, series_reciprocal
from .kernels import (BivariateKernel, DiagonalKernel, KernelError, KernelFormatError, PolyFactor,
                      bivariate_cofactor, bivariate_product, diag_product, dirichlet_kernel, frame_from_gram,
                      hk_kernel, kernel_from_json, kernel_to_json, mn_kernel, psd_check, rank_one_augment,
                      standard_coeffs, szego_kernel)
from .shifts import (cofactor_diagonal, defect_coeffs, hypercontraction_sum, mueller_diagonal_check, power_norm,
                     shields_ratio_extrema, weights_from_kernel)
from .geometry import (GridSpec, curvature_diagonal, curvature_fd, jet1_trace, jet_condition_check, jet_metric,
                       matrix_metric_bounds, metric_at, metric_ratio_extrema, trace_curvature_identity_check)
from .multipliers import (MonomialSymbol, frame_summability_check, monomial_mult_norm, mult_norm_bruteforce,
                          poly_mult_norm_upper)

__version__ = "0.1.0"
