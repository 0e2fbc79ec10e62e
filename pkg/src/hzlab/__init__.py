"""hzlab: Hurwitz zeta moments and shifted Dirichlet polynomial mean values."""
from ._backend import BACKEND
from .afe import (AfeDecomposition, afe_decompose, kernel_eval, kernel_l1,
                  residual_envelope_scan, selection_identity_check)
from .dirichlet import PolynomialSpec, TGrid, eval_at, make_spec, multi_eval
from .errors import *  # noqa: F401,F403
from .hurwitz import (EulerMaclaurinParams, HurwitzPoint, chi, chi_factor,
                      hurwitz_eval, hurwitz_grid, riemann_eval)
from .moments import (MomentResult, QuadratureSpec, ScalingFit, product_mean_value,
                      rho, scaling_fit, t2_ratio, theorem3_ratio, twisted_fourth_moment,
                      zeta_power_moment)

__version__ = "0.1.0"
