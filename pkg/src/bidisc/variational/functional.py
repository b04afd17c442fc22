"""The functional ``Psi_c(f) = A(f) - c * integral r(f(t)) dt`` and gauge-modelled Hamiltonians.

For the bidisc gauge

    r(z) = |z|^2 / 2 + |Re(z1^2 + z2^2)| / 2,

the first half integrates to ``sum_k |f_k|^2 / 2`` by Parseval.  The second
is the L1 norm of a real trigonometric polynomial ``q``, integrated exactly
with its antiderivative between zeros that are located on a grid, refined
where a curvature bound cannot exclude hidden zero pairs, and polished by
safeguarded Newton steps.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import gauge_bidisc
from .loops import action_A, eval_loop, re_sq_coefficients, to_points


def _grid_size(M, nodes=None):
    default = max(128, 32 * (2 * M + 1))
    return default if nodes is None else max(int(nodes), 2)


class _TrigPoly:
    """Rows of real trigonometric polynomials evaluated at per-row points."""

    def __init__(self, c):
        M = (c.shape[-1] - 1) // 2
        self.c = c
        self.w = 2j * np.pi * np.arange(-M, M + 1)
        safe_w = np.where(self.w == 0, 1, self.w)
        self.anti = np.where(self.w == 0, 0, 1) * c / safe_w
        self.c0 = c[:, M].real
        self.curvature = np.sum(np.abs(c) * np.abs(self.w) ** 2, axis=1)

    def q(self, rows, t):
        return np.sum(self.c[rows] * np.exp(np.multiply.outer(t, self.w)), axis=-1).real

    def dq(self, rows, t):
        return np.sum(self.c[rows] * self.w * np.exp(np.multiply.outer(t, self.w)), axis=-1).real

    def Q(self, rows, t):
        # antiderivative
        e = np.exp(np.multiply.outer(t, self.w))
        return self.c0[rows] * t + np.sum(self.anti[rows] * e, axis=-1).real


def _root_free(qa, qb, da, db, h, curv):
    """True where the second-derivative bound keeps ``q`` away from zero on the cell."""
    sa = np.sign(qa)
    from_a = np.minimum(sa * qa, sa * (qa + da * h) - curv * h * h / 2)
    sb = np.sign(qb)
    from_b = np.minimum(sb * qb, sb * (qb - db * h) - curv * h * h / 2)
    return (sa == sb) & (sa != 0) & ((from_a > 0) | (from_b > 0))


def _negligible(qa, da, h, curv, scale):
    """True where ``|q|`` stays below roundoff of the coefficient size on the whole cell."""
    return np.abs(qa) + np.abs(da) * h + curv * h * h / 2 <= 1e-14 * scale


def abs_integral(coeffs, nodes=None, max_depth=10, split=4):
    """``integral_0^1 |q(t)| dt`` for real trigonometric polynomials.

    ``coeffs`` has shape ``(..., 2M + 1)`` with the coefficient of
    ``e^{2 pi i m t}`` at position ``m + M``; rows must be Hermitian.  The
    unit interval is cut into ``nodes`` cells.  A cell is accepted when a
    bound on ``q''`` rules out zeros inside it, or when ``q`` changes sign
    at its ends (the single zero is then polished), or when ``|q|`` is at
    roundoff level throughout; other cells are split.
    Accepted cells are integrated exactly with the antiderivative.
    """
    c = np.asarray(coeffs, dtype=complex)
    batch_shape = c.shape[:-1]
    c = c.reshape(-1, c.shape[-1])
    M = (c.shape[-1] - 1) // 2
    poly = _TrigPoly(c)
    scale = np.sum(np.abs(c), axis=1)
    N = _grid_size(M, nodes)
    grid = np.arange(N + 1) / N
    e = np.exp(np.outer(poly.w, grid))
    qg = (c @ e).real
    dg = (c @ (poly.w[:, None] * e)).real
    Qg = poly.c0[:, None] * grid + (poly.anti @ e).real
    rows = np.repeat(np.arange(len(c)), N)
    a = np.tile(grid[:-1], len(c))
    h = np.full(rows.shape, 1.0 / N)
    qa, qb = qg[:, :-1].ravel(), qg[:, 1:].ravel()
    da, db = dg[:, :-1].ravel(), dg[:, 1:].ravel()
    Qa, Qb = Qg[:, :-1].ravel(), Qg[:, 1:].ravel()
    total = np.zeros(len(c))
    for depth in range(max_depth + 1):
        change = (qa > 0) != (qb > 0)
        curv = poly.curvature[rows]
        done = (change | _root_free(qa, qb, da, db, h, curv)
                | _negligible(qa, da, h, curv, scale[rows]) | (depth == max_depth))
        same = done & ~change
        np.add.at(total, rows[same], np.abs(Qb[same] - Qa[same]))
        if change.any():
            r_rows = rows[change]
            r = _polish_roots(poly, r_rows, a[change], h[change], qa[change])
            Qr = poly.Q(r_rows, r)
            np.add.at(total, r_rows, np.abs(Qr - Qa[change]) + np.abs(Qb[change] - Qr))
        todo = ~done
        if not todo.any():
            break
        rows = np.repeat(rows[todo], split)
        h = np.repeat(h[todo] / split, split)
        a = np.repeat(a[todo], split) + h * np.tile(np.arange(split), todo.sum())
        pts = np.concatenate([a, a + h])
        rr = np.concatenate([rows, rows])
        qv, dv, Qv = poly.q(rr, pts), poly.dq(rr, pts), poly.Q(rr, pts)
        m = len(a)
        qa, qb, da, db, Qa, Qb = qv[:m], qv[m:], dv[:m], dv[m:], Qv[:m], Qv[m:]
    return total.reshape(batch_shape) if batch_shape else float(total[0])


def _polish_roots(poly, rows, lo, width, q_lo, tol=1e-12):
    """The sign change of ``q`` inside ``[lo, lo + width]``, by safeguarded Newton.

    An error ``d`` in the zero moves the antiderivative only by O(q' d^2),
    so a modest tolerance suffices.
    """
    a = lo.copy()
    b = lo + width
    sign_a = q_lo > 0
    x = a + 0.5 * width
    active = np.arange(len(x))
    for _ in range(100):
        r, xa = rows[active], x[active]
        e = np.exp(np.multiply.outer(xa, poly.w)) * poly.c[r]
        fx = e.sum(axis=-1).real
        dfx = (e * poly.w).sum(axis=-1).real
        left = (fx > 0) == sign_a[active]
        a[active] = np.where(left, xa, a[active])
        b[active] = np.where(left, b[active], xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = xa - fx / dfx
        ok = (newton > a[active]) & (newton < b[active]) & np.isfinite(newton)
        x_new = np.where(ok, newton, 0.5 * (a[active] + b[active]))
        x[active] = x_new
        keep = (np.abs(x_new - xa) > tol) & (b[active] - a[active] > tol)
        active = active[keep]
        if not len(active):
            break
    return x


def gauge_integral(f, nodes=None):
    """``integral_0^1 r(f(t)) dt`` for the bidisc gauge."""
    return gauge_integral_batch(f.coeffs, nodes)


def gauge_integral_batch(coeffs, nodes=None):
    coeffs = np.asarray(coeffs, dtype=complex)
    l2 = np.sum(np.abs(coeffs) ** 2, axis=(-2, -1))
    return 0.5 * l2 + 0.5 * abs_integral(re_sq_coefficients(coeffs), nodes)


def gauge_integral_sampled(f, nodes):
    """Trapezoid rule for the same integral; slow to converge, kept as an independent check."""
    t = np.arange(nodes) / nodes
    return float(np.mean(gauge_bidisc(to_points(eval_loop(f, t)))))


def psi_c(f, c, nodes=None):
    """``A(f) - c * integral r(f)``; ``nodes`` (>= 4K + 4) sets the zero-isolation grid."""
    if nodes is not None and nodes < 4 * f.K + 4:
        raise ValueError(f"nodes must be at least 4K + 4 = {4 * f.K + 4}")
    return action_A(f) - c * float(gauge_integral(f, nodes))


def psi_batch(coeffs, c, nodes=None):
    """``Psi_c`` for a stack of coefficient arrays of shape ``(B, 2K + 1, 2)``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    K = (coeffs.shape[-2] - 1) // 2
    freqs = np.arange(-K, K + 1)
    action = np.pi * np.sum(freqs * np.sum(np.abs(coeffs) ** 2, axis=-1), axis=-1)
    return action - c * gauge_integral_batch(coeffs, nodes)


@dataclass(frozen=True)
class RampProfile:
    """Convex profile ``F`` with ``F = 0`` on ``s <= 1`` and ``F'`` piecewise linear.

    ``F'`` interpolates ``slopes`` at ``knots`` and stays at the last slope
    afterwards, so ``F`` is eventually linear.
    """
    c: float
    eps: float
    knots: tuple
    slopes: tuple

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        s = np.asarray(self.slopes, dtype=float)
        if len(k) != len(s) or len(k) < 2:
            raise ValueError("need matching knots and slopes, at least two")
        if k[0] < 1 or np.any(np.diff(k) <= 0):
            raise ValueError("knots must increase and start at or after 1")
        if s[0] != 0 or np.any(np.diff(s) < 0):
            raise ValueError("slopes must start at 0 and be nondecreasing")
        if not math.isclose(s[-1], self.c + self.eps):
            raise ValueError("final slope must equal c + eps")

    @classmethod
    def knee(cls, c, eps, width):
        """Slope rising linearly from 0 to ``c + eps`` on ``[1, 1 + width]``."""
        return cls(c, eps, (1.0, 1.0 + width), (0.0, c + eps))

    def _arrays(self):
        return np.asarray(self.knots, dtype=float), np.asarray(self.slopes, dtype=float)

    def deriv(self, s):
        k, sl = self._arrays()
        return np.interp(s, k, sl, left=0.0, right=sl[-1])

    def __call__(self, s):
        k, sl = self._arrays()
        s = np.asarray(s, dtype=float)
        # exact integral of the piecewise-linear derivative
        seg = np.diff(k) * (sl[:-1] + sl[1:]) / 2
        cum = np.r_[0.0, np.cumsum(seg)]
        x = np.clip(s, k[0], None)
        i = np.clip(np.searchsorted(k, x, side="right") - 1, 0, len(k) - 1)
        inside = i < len(k) - 1
        j = np.minimum(i, len(k) - 2)
        dx = x - k[i]
        slope_here = np.where(inside, (sl[j + 1] - sl[j]) / (k[j + 1] - k[j]), 0.0)
        out = cum[i] + sl[i] * dx + 0.5 * slope_here * dx * dx
        return out if out.ndim else float(out)

    def slope_inverse(self, alpha):
        """Smallest ``s`` with ``F'(s) = alpha``, or None when ``alpha >= c + eps``."""
        k, sl = self._arrays()
        if alpha >= sl[-1] or alpha <= 0:
            return None
        i = int(np.searchsorted(sl, alpha, side="left"))
        # sl[i - 1] < alpha <= sl[i]
        return float(k[i - 1] + (alpha - sl[i - 1]) * (k[i] - k[i - 1]) / (sl[i] - sl[i - 1]))


@dataclass(frozen=True)
class CriticalValue:
    alpha: float
    s: float
    value: float


def ramp_critical_values(spectrum, ramp):
    """Critical values ``s alpha - F(s)`` where ``F'(s) = alpha`` for each spectral value.

    Returns ``(values, uncrossed)``; the second list holds the alphas the
    ramp never reaches.
    """
    found, uncrossed = [], []
    for el in spectrum:
        alpha = float(getattr(el, "value", el))
        s = ramp.slope_inverse(alpha)
        if s is None:
            uncrossed.append(alpha)
        else:
            found.append(CriticalValue(alpha, s, s * alpha - ramp(s)))
    return found, uncrossed


def hamiltonian_action(f, ramp, nodes=4096):
    """``A(f) - integral F(r(f(t))) dt`` for the Hamiltonian ``F o r``."""
    t = np.arange(nodes) / nodes
    r = gauge_bidisc(to_points(eval_loop(f, t)))
    return action_A(f) - float(np.mean(ramp(r)))
