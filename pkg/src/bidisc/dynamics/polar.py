"""The flow in polar coordinates ``x = r1 e^{i phi1}``, ``y = r2 e^{i phi2}``.

Besides the radii and angles the state carries ``r3 = x . y``, which obeys

    r1 r1' = -a r3,   r2 r2' = b r3,   r3' = b r1^2 - a r2^2,
    r1 phi1' = a r2 sin(phi1 - phi2),   r2 phi2' = b r1 sin(phi1 - phi2),

with ``a = 2n g'(n(r2^2 - 1))`` and ``b = 2n g'(n(r1^2 - 1))``.  This is an
independent route to the same dynamics and serves as a cross-check on the
Cartesian integrator.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import OdeSolution, solve_ivp

from ..errors import NumericalFailure

MIN_RADIUS = 1e-6


class CoordinateSingularity(NumericalFailure):
    pass


@dataclass(frozen=True)
class PolarState:
    r1: float
    r2: float
    phi1: float
    phi2: float
    r3: float

    @classmethod
    def from_point(cls, pt):
        x1, x2, y1, y2 = map(float, pt)
        return cls(math.hypot(x1, x2), math.hypot(y1, y2), math.atan2(x2, x1),
                   math.atan2(y2, y1), x1 * y1 + x2 * y2)

    def to_point(self):
        return np.array([self.r1 * math.cos(self.phi1), self.r1 * math.sin(self.phi1),
                         self.r2 * math.cos(self.phi2), self.r2 * math.sin(self.phi2)])

    def as_array(self):
        return np.array([self.r1, self.r2, self.phi1, self.phi2, self.r3])

    def check(self, tol=1e-12):
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("radii must be nonnegative")
        scale = max(1.0, self.r1 * self.r2)
        if self.r3 ** 2 > (self.r1 * self.r2) ** 2 + tol * scale:
            raise ValueError("r3 violates Cauchy-Schwarz")
        expected = self.r1 * self.r2 * math.cos(self.phi1 - self.phi2)
        if abs(self.r3 - expected) > tol * scale:
            raise ValueError("r3 is inconsistent with the angles")


def polar_rhs(params):
    n, p = params.n, params.p

    def dg(s):
        return p * s ** (p - 1) if s > 0 else 0.0

    def f(t, s):
        r1, r2, phi1, phi2, r3 = s
        a = 2 * n * dg(n * (r2 * r2 - 1))
        b = 2 * n * dg(n * (r1 * r1 - 1))
        sin_d = np.sin(phi1 - phi2)
        return [-a * r3 / r1, b * r3 / r2, a * r2 * sin_d / r1, b * r1 * sin_d / r2,
                b * r1 * r1 - a * r2 * r2]

    return f


@dataclass
class PolarTrajectory:
    t: np.ndarray
    states: np.ndarray
    sol: object

    def __call__(self, t):
        return self.sol(t).T

    def points(self, t=None):
        s = self.states if t is None else self(t)
        r1, r2, phi1, phi2 = s[:, 0], s[:, 1], s[:, 2], s[:, 3]
        return np.column_stack([r1 * np.cos(phi1), r1 * np.sin(phi1),
                                r2 * np.cos(phi2), r2 * np.sin(phi2)])

    def det(self):
        r1, r2, phi1, phi2 = self.states[:, :4].T
        return r1 * r2 * np.sin(phi1 - phi2)


def _seam_event(index, direction):
    def event(t, s):
        return s[index] - 1.0

    event.terminal = True
    event.direction = direction
    return event


def _next_direction(rate):
    # after crossing r = 1 with rate r', the next crossing goes the other way
    return -float(np.sign(rate))


def flow_polar(init, params, t_end, tol=1e-10, max_segments=100_000):
    """Integrate the polar system from ``init`` with DOP853.

    ``g'`` has a kink where a radius passes through 1, so integration stops
    at each such crossing and restarts; within a segment the field is
    polynomial and DOP853 keeps its full order.  The local tolerance is
    ``tol * 1e-3``, matching the tighter stepping of the Cartesian route.
    """
    init.check()
    if min(init.r1, init.r2) < MIN_RADIUS:
        raise CoordinateSingularity("initial radius below the coordinate cutoff")

    def small_r1(t, s):
        return s[0] - MIN_RADIUS

    def small_r2(t, s):
        return s[1] - MIN_RADIUS

    small_r1.terminal = small_r2.terminal = True
    rhs = polar_rhs(params)
    step_tol = max(tol * 1e-3, 1e-13)
    state = init.as_array()
    rate = rhs(0.0, state)
    directions = [_next_direction(rate[i]) if abs(state[i] - 1.0) < 1e-13 else 0.0
                  for i in (0, 1)]
    t0 = 0.0
    times, states, ts, interpolants = [np.array([0.0])], [state[None, :]], [0.0], []
    for _ in range(max_segments):
        # oversized trial steps may overflow before being rejected
        with np.errstate(over="ignore", invalid="ignore"):
            res = solve_ivp(rhs, (t0, t_end), state, method="DOP853", rtol=step_tol,
                            atol=step_tol, dense_output=True,
                            events=(small_r1, small_r2, _seam_event(0, directions[0]),
                                    _seam_event(1, directions[1])))
        if res.status == -1:
            raise NumericalFailure(res.message)
        times.append(res.t[1:])
        states.append(res.y.T[1:])
        ts.extend(res.sol.ts[1:])
        interpolants.extend(res.sol.interpolants)
        if res.status == 0:
            break
        if len(res.t_events[0]) or len(res.t_events[1]):
            raise CoordinateSingularity(f"a radius fell below {MIN_RADIUS} at t={res.t[-1]:.6g}")
        t0, state = res.t[-1], res.y[:, -1]
        rate = rhs(t0, state)
        for i in (0, 1):
            if len(res.t_events[2 + i]):
                directions[i] = _next_direction(rate[i])
    else:
        raise NumericalFailure("too many seam crossings")
    return PolarTrajectory(np.concatenate(times), np.concatenate(states),
                           OdeSolution(ts, interpolants))
