"""Numerical laboratory for the first eigenvalue of the weighted
p-Laplacian on 1D-reducible model smooth metric measure spaces."""

__version__ = "0.1.0"

from .bounds import (BoundSet, bound_set, lambda_max, local_bound,
                     model_lambda, p_harmonic_bound, sharp_root,
                     soliton_lambda, x_root)
from .geometry import (ModelSpace, ProfileSpec, density, flat_interval_model,
                       hyperbolic_model_volume, laplacian_comparison_check,
                       line_exp_model, ricci_f_m_radial, volume_ratio_check,
                       weighted_volume)
from .mesh import (RadialField, RadialGrid, derivative, integrate_weighted,
                   lp_norm, restrict, sample)
from .plaplacian import (EigenResult, SolverOptions, apply_p_laplacian,
                         eigen_sweep, harmonic_radial, rayleigh_quotient,
                         solve_first_eigen)
from .reports import CheckReport
from .verify import (MoserTrace, check_global_sharp, check_harnack,
                     check_liouville_rate, check_local_gradient_estimate,
                     check_subsolution, gradient_ratio, log_gradient_field,
                     moser_trace, picone)
