"""Characteristic flow on the smooth approximants and its closed orbits."""

from ..paths import CharacteristicPath, action_of_path
from .flow import conservation, flow_cartesian, integrate_hybrid, trajectory_table
from .polar import CoordinateSingularity, PolarState, PolarTrajectory, flow_polar
from .shooting import (ApproxSpectrum, ShootingResult, approx_spectrum, assemble_loop,
                       hausdorff, shoot_closed)
from .transit import Transit, corner_entry, corner_transit, delta_phi_ode, delta_phi_quad

__all__ = [
    "ApproxSpectrum", "CharacteristicPath", "CoordinateSingularity", "PolarState",
    "PolarTrajectory", "ShootingResult", "Transit", "action_of_path", "approx_spectrum",
    "assemble_loop", "conservation", "corner_entry", "corner_transit", "delta_phi_ode",
    "delta_phi_quad", "flow_cartesian", "flow_polar", "hausdorff", "integrate_hybrid",
    "shoot_closed", "trajectory_table",
]
