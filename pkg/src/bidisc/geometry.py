"""Gauges, defining functions and gradients for the bidisc and its smoothings.

Points are arrays whose last axis holds ``(x1, x2, y1, y2)``.  The smooth
approximant with parameters ``(n, p)`` is

    D_n = { g(n(|x|^2 - 1)) + g(n(|y|^2 - 1)) <= 1 },   g(s) = max(s, 0)^p,

which is squeezed between the bidisc and the bidisc scaled by sqrt(1 + 1/n).
"""

from dataclasses import dataclass, asdict
from typing import NamedTuple

import numpy as np

from .config import DEFAULTS
from .errors import BracketError


class Point4(NamedTuple):
    x1: float
    x2: float
    y1: float
    y2: float


@dataclass(frozen=True)
class ApproximantParams:
    n: int
    p: float = 3.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.p >= 2:
            raise ValueError(f"p must be >= 2, got {self.p}")

    @property
    def rho(self):
        """Radius scale of the outer bidisc, sqrt(1 + 1/n)."""
        return float(np.sqrt(1.0 + 1.0 / self.n))

    def g(self, s):
        return np.maximum(s, 0.0) ** self.p

    def dg(self, s):
        return self.p * np.maximum(s, 0.0) ** (self.p - 1)

    def g_inv(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise ValueError("g is only invertible on u >= 0")
        return u ** (1.0 / self.p)


def g_profile(s, params):
    """Value, derivative and inverse of the profile at ``s``.

    The inverse is evaluated at the value, so it recovers ``max(s, 0)``.
    """
    value = params.g(s)
    return value, params.dg(s), params.g_inv(value)


def _split(pt):
    pt = np.asarray(pt, dtype=float)
    if pt.shape[-1] != 4:
        raise ValueError("points need four coordinates (x1, x2, y1, y2)")
    return pt[..., :2], pt[..., 2:]


def gauge_bidisc(pt):
    """``(|z|^2 + |Re(z1^2 + z2^2)|) / 2``, which equals ``max(|x|^2, |y|^2)``."""
    pt = np.asarray(pt, dtype=float)
    x1, x2, y1, y2 = np.moveaxis(pt, -1, 0)
    norm_sq = x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2
    re_sq = x1 * x1 - y1 * y1 + x2 * x2 - y2 * y2
    return 0.5 * (norm_sq + np.abs(re_sq))


def defining_Dn(pt, params):
    x, y = _split(pt)
    n = params.n
    return params.g(n * (np.sum(x * x, -1) - 1)) + params.g(n * (np.sum(y * y, -1) - 1)) - 1.0


def grad_defining_Dn(pt, params):
    x, y = _split(pt)
    n = params.n
    ax = 2 * n * params.dg(n * (np.sum(x * x, -1) - 1))
    ay = 2 * n * params.dg(n * (np.sum(y * y, -1) - 1))
    return np.concatenate([ax[..., None] * x, ay[..., None] * y], axis=-1)


def gauge_Dn(pt, params, rtol=DEFAULTS.gauge_rtol, max_iter=DEFAULTS.gauge_max_iter):
    """The 2-homogeneous gauge of ``D_n``, by bisection along the ray through ``pt``.

    Since ``D_n`` lies between the bidisc and its sqrt(1 + 1/n) dilate, the
    root is bracketed by ``[r / (1 + 1/n), r]`` with ``r`` the bidisc gauge.
    """
    x, y = _split(pt)
    a = np.sum(x * x, -1)
    b = np.sum(y * y, -1)
    r = np.maximum(a, b)
    if np.any(r == 0):
        raise ValueError("the gauge is only evaluated away from the origin")
    n = params.n

    def h(tau):
        return params.g(n * (a / tau - 1)) + params.g(n * (b / tau - 1)) - 1.0

    lo = r / (1.0 + 1.0 / n)
    hi = np.array(r, dtype=float)
    if np.any(h(lo) < 0) or np.any(h(hi) > 0) or not np.all(np.isfinite(r)):
        raise BracketError("radial bracket does not enclose the boundary")
    for _ in range(max_iter):
        if np.all(hi - lo <= rtol * hi):
            break
        mid = 0.5 * (lo + hi)
        inside = h(mid) <= 0
        hi = np.where(inside, mid, hi)
        lo = np.where(inside, lo, mid)
    else:
        raise BracketError(f"gauge bisection did not converge in {max_iter} steps")
    out = 0.5 * (lo + hi)
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class SandwichReport:
    n: int
    p: float
    samples: int
    seed: int
    nesting_violations: int
    inner_violations: int
    outer_violations: int
    nesting_margin: float
    inner_margin: float
    outer_margin: float

    @property
    def ok(self):
        return self.nesting_violations == self.inner_violations == self.outer_violations == 0

    def to_dict(self):
        return asdict(self)


def _uniform_disc(rng, size, radius):
    r = radius * np.sqrt(rng.random(size))
    phi = rng.uniform(0, 2 * np.pi, size)
    return np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)


def sandwich_check(params, samples=10_000, seed=0, slack=1e-12):
    """Monte-Carlo test of ``D_{n+1} in D_n`` and ``D_n / rho in bidisc in D_n``.

    Margins are the smallest signed distance from violating the inclusion
    (positive means satisfied), measured in defining-function units.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    radius = 1.05 * params.rho
    pts = np.concatenate([_uniform_disc(rng, samples, radius),
                          _uniform_disc(rng, samples, radius)], axis=-1)
    next_params = ApproximantParams(params.n + 1, params.p)
    f_n = defining_Dn(pts, params)
    f_next = defining_Dn(pts, next_params)
    r = gauge_bidisc(pts)

    def margin(mask, values):
        return float(values[mask].min()) if mask.any() else float("inf")

    in_next = f_next <= 0
    in_n = f_n <= 0
    in_bidisc = r <= 1
    nest = margin(in_next, -f_n)
    inner = margin(in_n, 1 - r / params.rho ** 2)
    outer = margin(in_bidisc, -f_n)
    return SandwichReport(
        params.n, params.p, samples, seed,
        int(np.sum(in_next & (f_n > slack))),
        int(np.sum(in_n & (r / params.rho ** 2 > 1 + slack))),
        int(np.sum(in_bidisc & (f_n > slack))),
        nest, inner, outer)
