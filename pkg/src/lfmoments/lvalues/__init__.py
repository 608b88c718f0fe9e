"""Direct L-value computation: zeta sweeps, quadratic twists, level 11."""

from .checkpoint import Checkpoint
from .discriminants import (DiscriminantStream, chi_average_empirical,
                            chi_average_expected, count_asymptotic,
                            fundamental_block, h2_factor)
from .elevenl import (KAPPA_11_PAPER, kappa_11, l11_afe_value,
                      l11_central_twist, l11_moment_sum, theta_c11)
from .quadratic import (CriticalValueRecord, central_value_hurwitz,
                        central_value_quadratic, central_values_block,
                        quad_moment_sum)
from .zetaline import (Weight, conjecture_integral, hardy_z_rs,
                       hardy_z_sign_changes, moment_integral_zeta,
                       theta_asymptotic, zeta_critical)

__all__ = [
    "Checkpoint", "DiscriminantStream", "chi_average_empirical",
    "chi_average_expected", "count_asymptotic", "fundamental_block",
    "h2_factor", "KAPPA_11_PAPER", "kappa_11", "l11_afe_value",
    "l11_central_twist", "l11_moment_sum", "theta_c11",
    "CriticalValueRecord", "central_value_hurwitz", "central_value_quadratic",
    "central_values_block", "quad_moment_sum", "Weight",
    "conjecture_integral", "hardy_z_rs", "hardy_z_sign_changes",
    "moment_integral_zeta", "moment_integrals_multi", "theta_asymptotic", "zeta_critical",
]
