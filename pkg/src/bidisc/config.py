"""Numerical tolerances used throughout the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # value comparisons in the spectrum
    value_tol: float = 1e-12
    orbit_closure: float = 1e-12
    # radial root-finding for the approximant gauge
    gauge_rtol: float = 1e-12
    gauge_max_iter: int = 200
    # Gauss-Legendre for the angular defect
    quad_rtol: float = 1e-8
    quad_nodes: int = 32
    quad_max_nodes: int = 4096
    # shooting
    shoot_residual: float = 1e-10
    shoot_max_iter: int = 200
    # closed-path check before computing an action
    closure_rel: float = 1e-6
    # the corner integrator runs at tol * step_tol_factor (see dynamics)
    step_tol_factor: float = 1e-4
    step_tol_floor: float = 2e-15
    # Fourier-loop quadrature
    l1_slack: float = 1e-9
    # margin added when certifying strict interval separation
    certify_margin: float = 1e-12


DEFAULTS = Tolerances()
