"""Fourier-loop model of the loop space, the functional Psi_c and its certificates."""

from .certificates import (CertificateCoefficients, GammaCoverage, certificate_coefficients,
                           i8_threshold, i8_threshold_numeric, quadratic_roots,
                           verify_gamma_profile)
from .families import (GammaProfile, ScanReport, build_W2_element, build_W3_element,
                       gamma_profile, negativity_scan, quadric_defect)
from .functional import (CriticalValue, RampProfile, abs_integral, gauge_integral,
                         gauge_integral_sampled, hamiltonian_action, psi_batch, psi_c,
                         ramp_critical_values)
from .loops import (FourierLoop, P_minus, P_plus, P_zero, action_A, e_inner, eval_loop,
                    fourier_coeff_re_sq, l1_coeff_bound, re_sq_coefficients, to_points)

__all__ = [
    "CertificateCoefficients", "CriticalValue", "FourierLoop", "GammaCoverage", "GammaProfile",
    "P_minus", "P_plus", "P_zero", "RampProfile", "ScanReport", "abs_integral", "action_A",
    "build_W2_element", "build_W3_element", "certificate_coefficients", "e_inner",
    "eval_loop", "fourier_coeff_re_sq", "gamma_profile", "gauge_integral",
    "gauge_integral_sampled", "hamiltonian_action", "i8_threshold", "i8_threshold_numeric",
    "l1_coeff_bound", "negativity_scan", "psi_batch", "psi_c", "quadratic_roots",
    "quadric_defect", "ramp_critical_values", "re_sq_coefficients", "to_points",
    "verify_gamma_profile",
]
