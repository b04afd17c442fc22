"""Sampled closed trajectories in C^2 and their symplectic action.

Points are stored as rows ``(x1, x2, y1, y2)``.  The action is
``1/2 * integral of (x . dy - y . dx)``, which is the signed area enclosed by
the projections to the planes ``(x1, y1)`` and ``(x2, y2)``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULTS


@dataclass
class CharacteristicPath:
    times: np.ndarray
    points: np.ndarray
    period: float
    action: float = float("nan")
    closure_residual: float = float("nan")
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, times, points, action=None, **meta):
        times = np.asarray(times, dtype=float)
        points = np.asarray(points, dtype=float).reshape(-1, 4)
        if len(times) != len(points):
            raise ValueError("times and points differ in length")
        residual = float(np.linalg.norm(points[-1] - points[0]))
        path = cls(times, points, float(times[-1] - times[0]),
                   float("nan") if action is None else float(action), residual, dict(meta))
        return path

    @property
    def samples(self):
        return list(zip(self.times.tolist(), map(tuple, self.points.tolist())))

    @property
    def diameter(self):
        return float(np.linalg.norm(np.ptp(self.points, axis=0)))

    def det(self):
        x1, x2, y1, y2 = self.points.T
        return x1 * y2 - x2 * y1

    def reversed(self):
        t = self.times[-1] - self.times[::-1]
        return CharacteristicPath.from_samples(t, self.points[::-1], -self.action, **self.meta)


def shoelace_action(points):
    """Sum over both symplectic planes of the signed polygon area (closing edge included)."""
    p = np.asarray(points, dtype=float).reshape(-1, 4)
    q = np.roll(p, -1, axis=0)
    x, y = p[:, :2], p[:, 2:]
    xn, yn = q[:, :2], q[:, 2:]
    return 0.5 * float(np.sum(x * yn - xn * y))


def action_of_path(path, closure_rel=DEFAULTS.closure_rel):
    """Action of a closed sampled path.

    Exact for piecewise-linear paths whose corners are all sampled.  Smooth
    stretches are treated as polygons, so accuracy there depends on sampling.
    """
    diam = path.diameter
    if diam > 0 and path.closure_residual > closure_rel * diam:
        warnings.warn(
            f"path is not closed: residual {path.closure_residual:.3g} vs diameter {diam:.3g}",
            RuntimeWarning, stacklevel=2)
    return shoelace_action(path.points)
