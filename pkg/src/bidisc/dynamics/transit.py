"""Passage through the corner region and the angular defect it produces.

A characteristic arrives at the corner with ``|x| = 1`` and
``y = rho e^{i theta}`` (``rho = sqrt(1 + 1/n)``) and leaves when ``|y|``
returns to 1.  Both angles rotate by the same amount ``dphi < 0``; for the
bidisc itself ``dphi = 0`` and the orbit is a billiard polygon.

Two routes are provided: direct integration of the flow, and a quadrature
that uses the conservation of ``det(x, y)`` and of the defining function to
reduce the transit to a one-dimensional integral.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from ..config import DEFAULTS
from ..errors import NumericalFailure, TransitError
from . import _rk


def corner_entry(theta0, params):
    """State ``(x1, x2, y1, y2)`` on entry, with x placed at angle pi + 2 theta0."""
    rho = params.rho
    ang = math.pi + 2 * theta0
    return np.array([math.cos(ang), math.sin(ang), rho * math.cos(theta0), rho * math.sin(theta0)])


def _wrap(a):
    return (a + math.pi) % (2 * math.pi) - math.pi


@dataclass
class Transit:
    theta0: float
    delta_phi: float
    transit_time: float
    half_time: float
    entry: np.ndarray
    exit: np.ndarray
    action: float
    dense: object

    @property
    def angle_gap_change(self):
        """Change of phi1 - phi2 between entry and exit."""
        def gap(z):
            return math.atan2(z[1], z[0]) - math.atan2(z[3], z[2])
        return abs(_wrap(gap(self.exit) - gap(self.entry)))

    def reflection_error(self, samples=401):
        """Largest ``|r1(t) - r2(2T - t)|`` over the transit."""
        t = np.linspace(0.0, self.transit_time, samples)
        z = self.dense(t)
        z_rev = self.dense(self.transit_time - t)
        return float(np.max(np.abs(np.hypot(z[:, 0], z[:, 1]) - np.hypot(z_rev[:, 2], z_rev[:, 3]))))


def _check_theta(theta0):
    if not 0 < theta0 < math.pi / 2:
        raise ValueError(f"theta0 must lie in (0, pi/2), got {theta0}")


def corner_transit(theta0, params, tol=1e-12, dense=True):
    """Integrate one corner transit; ``theta0`` may be 0 here (radial transit)."""
    if not 0 <= theta0 < math.pi / 2:
        raise ValueError(f"theta0 must lie in [0, pi/2), got {theta0}")
    z0 = corner_entry(theta0, params)
    out = _rk.run_corner(np.append(z0, 0.0), params.n, params.p, tol, dense=dense)
    if out["status"] != _rk.EXIT_Y:
        raise TransitError(f"corner transit ended with status {out['status']}")
    z1 = out["z"][:4]
    dphi = _wrap(math.atan2(z1[1], z1[0]) - math.atan2(z0[1], z0[0]))
    return Transit(theta0, dphi, out["t"], out["t_mid"], z0, z1.copy(), float(out["z"][4]),
                   out["dense"])


def delta_phi_ode(theta0, params, tol=1e-12):
    """Angular defect by direct integration of the flow through the corner."""
    _check_theta(theta0)
    return corner_transit(theta0, params, tol, dense=False).delta_phi


@lru_cache(maxsize=16)
def _gauss_legendre(nodes):
    x, w = roots_legendre(nodes)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _gl_pair(fun, upper, nodes):
    x, w = _gauss_legendre(nodes)
    s = 0.5 * upper * (x + 1.0)
    return 0.5 * upper * float(np.dot(w, fun(s)))


def delta_phi_quad(theta0, params, nodes=DEFAULTS.quad_nodes, rtol=DEFAULTS.quad_rtol,
                   max_nodes=DEFAULTS.quad_max_nodes):
    """Angular defect from the conserved quantities.

    With ``u = r1^2`` and ``v = r2^2`` tied by ``g(n(u-1)) + g(n(v-1)) = 1``,

        dphi = -(det / 2) * integral_1^{1+1/n} du / (u sqrt(u v - det^2)),

    ``det = rho sin(theta0)``.  ``v(u)`` has a vertical tangent at the upper
    end, so the range is split where ``u = v`` and the second half is
    parametrised by ``v`` instead.  Both halves are then smooth and
    Gauss-Legendre is refined by doubling until two orders agree.
    """
    _check_theta(theta0)
    n = params.n
    det = params.rho * math.sin(theta0)
    det_sq = det * det
    s_mid = float(params.g_inv(0.5))

    def other(s):
        # n(v - 1) as a function of n(u - 1) on the boundary
        return params.g_inv(np.clip(1.0 - params.g(s), 0.0, None))

    def kernel(u, v):
        q = u * v - det_sq
        if np.any(q <= 0):
            raise NumericalFailure("integrand denominator vanishes inside the range")
        return 1.0 / (u * np.sqrt(q))

    def first(s):
        return kernel(1 + s / n, 1 + other(s) / n) / n

    def second(sig):
        s = other(sig)
        jac = params.dg(sig) / params.dg(s)
        return jac * kernel(1 + s / n, 1 + sig / n) / n

    def total(m):
        return _gl_pair(first, s_mid, m) + _gl_pair(second, s_mid, m)

    prev = total(nodes)
    m = nodes
    while True:
        m *= 2
        cur = total(m)
        if abs(cur - prev) <= rtol * abs(cur):
            return -0.5 * det * cur
        if m >= max_nodes:
            raise NumericalFailure(f"quadrature did not reach rtol={rtol} with {m} nodes")
        prev = cur
