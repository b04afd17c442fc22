"""Closed characteristics of D_n found by shooting on the incidence angle.

A characteristic leaving ``x = (1, 0)`` with ``y = rho e^{i theta}`` turns by
``pi + 2(theta + dphi(theta))`` per side pair.  It closes after ``m`` pairs
when ``theta + dphi(theta)`` hits an admissible billiard angle for ``m``-gons.
"""

import math
from dataclasses import dataclass, asdict, field

import numpy as np

from ..config import DEFAULTS
from ..errors import BracketError, NumericalFailure
from ..spectrum import sigma_truncated, theta_kn
from .flow import integrate_hybrid
from .transit import delta_phi_quad

SHOOT_QUAD_RTOL = 1e-13


@dataclass
class ShootingResult:
    k: int
    m: int
    n: int
    p: float
    target: float
    theta_star: float
    delta_phi: float
    residual: float
    action: float
    closure_residual: float
    iterations: int
    path: object = field(default=None, repr=False)

    @property
    def bidisc_action(self):
        return 2 * self.m * math.cos(self.target)

    def to_dict(self):
        d = asdict(self)
        d.pop("path")
        d["bidisc_action"] = self.bidisc_action
        return d


def loop_start(theta, params):
    rho = params.rho
    return np.array([1.0, 0.0, rho * math.cos(theta), rho * math.sin(theta)])


def assemble_loop(theta, m, params, tol=1e-12):
    """Follow ``m`` side pairs from the standard start; returns the hybrid run."""
    return integrate_hybrid(loop_start(theta, params), params, tol, max_corners=2 * m)


def shoot_closed(k, m, params, tol=1e-12, residual_tol=DEFAULTS.shoot_residual,
                 max_iter=DEFAULTS.shoot_max_iter, keep_path=False):
    """Solve ``theta + dphi(theta) = theta_{k,m}`` by bisection and measure the loop.

    The action is the action integral over the assembled loop: exact on the
    straight sides, integrated to ``tol`` through each corner.
    """
    target = theta_kn(k, m)
    samples = []
    iterations = 0
    if target == 0.0:
        # radial transits: no angular defect
        theta, dphi, residual = 0.0, 0.0, 0.0
    else:
        def F(th):
            val = th + delta_phi_quad(th, params, rtol=SHOOT_QUAD_RTOL) - target
            samples.append((th, val))
            return val

        lo, f_lo = target, F(target)
        if f_lo >= 0:
            raise BracketError("no angular defect at the target angle", samples)
        ceiling = math.pi / 2 - 1e-9
        width = 2 * abs(f_lo) + 1e-12
        while True:
            hi = min(target + width, ceiling)
            f_hi = F(hi)
            if f_hi > 0:
                break
            if hi >= ceiling:
                raise BracketError(f"no sign change of the closure function for (k={k}, m={m})",
                                   samples)
            lo, f_lo = hi, f_hi
            width *= 2
        theta, residual = (lo, f_lo) if abs(f_lo) < abs(f_hi) else (hi, f_hi)
        while abs(residual) > residual_tol:
            if iterations >= max_iter:
                raise BracketError("bisection did not reach the residual tolerance", samples)
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            f_mid = F(mid)
            iterations += 1
            if f_mid > 0:
                hi = mid
            else:
                lo = mid
            theta, residual = mid, f_mid
        dphi = residual + target - theta
        residual = abs(residual)
        if residual > residual_tol:
            raise BracketError("bisection stalled above the residual tolerance", samples)

    run = assemble_loop(theta, m, params, tol)
    path = run.path(k=k, m=m, n=params.n, p=params.p)
    return ShootingResult(k, m, params.n, params.p, target, theta, dphi, residual, run.action,
                          path.closure_residual, iterations, path if keep_path else None)


def hausdorff(a, b):
    """Hausdorff distance between finite sets of reals; 0 for two empty sets."""
    a = np.asarray(sorted(a), dtype=float)
    b = np.asarray(sorted(b), dtype=float)
    if len(a) == 0 and len(b) == 0:
        return 0.0
    if len(a) == 0 or len(b) == 0:
        return math.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass
class ApproxSpectrum:
    n: int
    p: float
    M: float
    eps: float
    actions: dict
    failures: dict
    approx_set: list
    reference_set: list
    distance: float

    def to_dict(self):
        return {
            "n": self.n, "p": self.p, "M": self.M, "eps": self.eps,
            "actions": [{"k": k, "m": m, "action": a} for (k, m), a in self.actions.items()],
            "failures": [{"k": k, "m": m, "error": e} for (k, m), e in self.failures.items()],
            "approx_set": self.approx_set, "reference_set": self.reference_set,
            "distance": self.distance,
        }


def approx_spectrum(params, M, eps, pairs, tol=1e-12):
    """Shoot every ``(k, m)`` pair and compare the truncated action sets.

    The reference set consists of the bidisc actions of the same pairs, so
    the distance measures convergence of the computed orbits only.  Failed
    pairs are recorded and left out of both sets.
    """
    actions, failures = {}, {}
    reference = []
    for k, m in pairs:
        try:
            res = shoot_closed(k, m, params, tol=tol)
        except (NumericalFailure, ValueError) as exc:
            failures[(k, m)] = str(exc)
            continue
        actions[(k, m)] = res.action
        reference.append(res.bidisc_action)
    approx_set = sigma_truncated(list(actions.values()), M, eps)
    ref_set = sigma_truncated(reference, M, eps)
    return ApproxSpectrum(params.n, params.p, M, eps, actions, failures, approx_set, ref_set,
                          hausdorff(approx_set, ref_set))
