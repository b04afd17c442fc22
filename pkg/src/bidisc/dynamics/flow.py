"""Characteristic flow on the boundary of the smooth approximant D_n.

The Hamiltonian vector field of the defining function is

    x' = -2n g'(n(|y|^2 - 1)) y,      y' = 2n g'(n(|x|^2 - 1)) x.

Outside the corner region one of the two factors vanishes identically, so the
moving component travels on a straight line at constant velocity.  Those
sides are solved in closed form and only corner transits are integrated.
"""

import math

import numpy as np

from ..config import DEFAULTS
from ..errors import NumericalFailure, StepSizeUnderflow
from ..geometry import defining_Dn
from ..paths import CharacteristicPath
from . import _rk

SEAM_TOL = 1e-12


def step_tolerance(tol):
    """Local tolerance handed to the corner integrator for a requested ``tol``.

    Conservation errors accumulate over thousands of transits and are
    amplified by the steep profile, so the integrator runs much tighter than
    the drift bound it is asked to meet.
    """
    return max(tol * DEFAULTS.step_tol_factor, DEFAULTS.step_tol_floor)


def _speed(params, s):
    return 2.0 * params.n * float(params.dg(s))


def _side_mode(z, params):
    n = params.n
    x, y = z[:2], z[2:4]
    sx = n * (x @ x - 1.0)
    sy = n * (y @ y - 1.0)
    if sx < -SEAM_TOL:
        return "x"
    if sy < -SEAM_TOL:
        return "y"
    xy = x @ y
    if abs(sx) <= SEAM_TOL and xy > 0:
        return "x"
    if abs(sy) <= SEAM_TOL and xy < 0:
        return "y"
    return "corner"


def _side(z, params, mode):
    """Exit time and velocity of the straight side starting at ``z``."""
    n = params.n
    x, y = z[:2], z[2:4]
    if mode == "x":
        v = -_speed(params, n * (y @ y - 1.0)) * y
        moving = x
    else:
        v = _speed(params, n * (x @ x - 1.0)) * x
        moving = y
    a = v @ v
    if a == 0.0:
        raise NumericalFailure("straight side with zero velocity; the point is not on the boundary")
    b = 2.0 * moving @ v
    c = moving @ moving - 1.0
    disc = max(b * b - 4.0 * a * c, 0.0)
    # far root; written to avoid cancellation when c is ~0 and b < 0
    s = (-b + math.sqrt(disc)) / (2.0 * a) if b <= 0 else -2.0 * c / (b + math.sqrt(disc))
    return max(s, 0.0), v


class HybridRun:
    """Accumulated output of the side/corner decomposition."""

    def __init__(self):
        self.times = []
        self.points = []
        self.action = 0.0
        self.corners = 0
        self.corner_actions = []

    def add(self, t, pts):
        self.times.append(np.atleast_1d(t))
        self.points.append(np.array(pts, dtype=float, ndmin=2))

    def path(self, **meta):
        t = np.concatenate(self.times)
        pts = np.concatenate(self.points)
        return CharacteristicPath.from_samples(t, pts, self.action, corners=self.corners, **meta)


def integrate_hybrid(init, params, steptol, t_end=math.inf, max_corners=None):
    """Follow the flow from ``init`` until ``t_end`` or after ``max_corners`` transits.

    ``steptol`` is the local error tolerance of the corner integrator.
    """
    if t_end == math.inf and max_corners is None:
        raise ValueError("need a time limit or a corner count")
    z = np.array(init, dtype=float).reshape(4)
    run = HybridRun()
    run.add(0.0, z)
    t = 0.0
    mode = _side_mode(z, params)
    while t < t_end and (max_corners is None or run.corners < max_corners):
        if mode in ("x", "y"):
            s, v = _side(z, params, mode)
            s = min(s, t_end - t)
            if mode == "x":
                run.action += -0.5 * (z[2:4] @ v) * s
                z[:2] = z[:2] + v * s
            else:
                run.action += 0.5 * (z[:2] @ v) * s
                z[2:4] = z[2:4] + v * s
            t += s
            run.add(t, z)
            mode = "corner"
            continue
        out = _rk.run_corner(np.append(z, 0.0), params.n, params.p, steptol, t_max=t_end - t)
        status = out["status"]
        if status == _rk.UNDERFLOW:
            raise StepSizeUnderflow(f"step size underflow at t={t + out['t']:.6g}")
        if status == _rk.TOO_MANY_STEPS:
            raise NumericalFailure("corner transit exceeded the step budget")
        run.add(t + out["step_t"][1:], out["step_z"][1:, :4])
        z = out["z"][:4].copy()
        t += out["t"]
        run.action += out["z"][4]
        run.corner_actions.append(out["z"][4])
        if status == _rk.REACHED_TMAX:
            break
        run.corners += 1
        mode = "x" if status == _rk.EXIT_X else "y"
    return run


def flow_cartesian(init, params, t_end, tol=1e-10):
    """Trajectory of the characteristic flow through ``init`` up to time ``t_end``.

    ``action`` on the returned path is the accumulated action integral; it
    is the symplectic action only when the trajectory happens to close.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    init = np.asarray(init, dtype=float).reshape(4)
    residual = abs(float(defining_Dn(init, params)))
    if residual > 1e-10:
        raise ValueError(f"initial point is off the boundary by {residual:.3g}")
    run = integrate_hybrid(init, params, step_tolerance(tol), t_end=t_end)
    return run.path(n=params.n, p=params.p, tol=tol)


def conservation(path, params):
    """Largest deviations of det(x, y) and of the defining function along ``path``."""
    det = path.det()
    energy = defining_Dn(path.points, params)
    return {"det_drift": float(np.max(np.abs(det - det[0]))),
            "energy_drift": float(np.max(np.abs(energy)))}


def trajectory_table(path, params):
    """Rows ``t, x1, x2, y1, y2, det, energy``."""
    return np.column_stack([path.times, path.points, path.det(), defining_Dn(path.points, params)])
