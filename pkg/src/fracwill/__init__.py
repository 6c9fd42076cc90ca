"""Numerics for the fractional Allen-Cahn approximation of the Willmore energy."""
from .constants import EtaSpec, eta, ibp_identity_residual, kappa_star, mu_log_rate, mu_w
from .coremath import beta_fn, gamma_ds, gamma_fn, kernel_reduction_constant, radial_moment
from .errors import (AccuracyError, ConfigurationError, ConvergenceError, DomainError, FoldError, FracwillError,
                     RangeError, SingularPointError)
from .experiment import (EnergyConfig, ExperimentReport, RecoveryField, energy_F, energy_G,
                         fermi_expansion_residual, flap2d, recovery_field, run_limsup_experiment)
from .fraclap import TailedFunction1D, flap_bound_check, flap_pointwise, flap_spectral
from .geometry import (PlanarCurve, SmoothedDistance, curvature, fermi_map, perimeter_and_willmore,
                       project_to_boundary, signed_distance, smoothed_distance)
from .heatkernel import fundamental_solution, heat_kernel, heat_kernel_deriv
from .profile import DoubleWell, SampledProfile, decay_fit, get_potential, profile_residual, solve_profile

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "ConfigurationError", "ConvergenceError", "DomainError", "DoubleWell", "EnergyConfig",
    "EtaSpec", "ExperimentReport", "FoldError", "FracwillError", "PlanarCurve", "RangeError", "RecoveryField",
    "SampledProfile", "SingularPointError", "SmoothedDistance", "TailedFunction1D", "beta_fn", "curvature",
    "decay_fit", "energy_F", "energy_G", "eta", "fermi_expansion_residual", "fermi_map", "flap2d",
    "flap_bound_check", "flap_pointwise", "flap_spectral", "fundamental_solution", "gamma_ds", "gamma_fn",
    "get_potential", "heat_kernel", "heat_kernel_deriv", "ibp_identity_residual", "kappa_star",
    "kernel_reduction_constant", "mu_log_rate", "mu_w", "perimeter_and_willmore", "profile_residual",
    "project_to_boundary", "radial_moment", "recovery_field", "run_limsup_experiment", "signed_distance",
    "smoothed_distance", "solve_profile",
]
