"""Compiled Dormand-Prince 8(5,3) integrator for transits of the corner region.

Inside the corner both profile terms are active and the flow is genuinely
nonlinear.  The state carries a fifth component, the accumulated action
``1/2 (x . y' - y . x')``, so that the action of a transit is integrated to
the same accuracy as the trajectory itself.

The Butcher tableau is borrowed from scipy's DOP853 implementation; step
control follows the same scheme.  Events are located by re-taking a full
step of adjusted length from the last accepted point, so the returned exit
state satisfies the exit condition to rounding level instead of inheriting
the interpolation error of dense output.
"""

import math

import numba as nb
import numpy as np
from scipy.integrate._ivp import dop853_coefficients as _dc

A_FULL = np.ascontiguousarray(_dc.A, dtype=np.float64)
B = np.ascontiguousarray(_dc.B, dtype=np.float64)
C_FULL = np.ascontiguousarray(_dc.C, dtype=np.float64)
E3 = np.ascontiguousarray(_dc.E3, dtype=np.float64)
E5 = np.ascontiguousarray(_dc.E5, dtype=np.float64)
D = np.ascontiguousarray(_dc.D, dtype=np.float64)
N_STAGES = _dc.N_STAGES
DIM = 5

EXIT_X = 0
EXIT_Y = 1
REACHED_TMAX = 2
UNDERFLOW = 3
TOO_MANY_STEPS = 4


@nb.njit(cache=True)
def _dg(s, p):
    return p * s ** (p - 1.0) if s > 0.0 else 0.0


@nb.njit(cache=True)
def rhs(z, n, p, out):
    ax = 2.0 * n * _dg(n * (z[0] * z[0] + z[1] * z[1] - 1.0), p)
    ay = 2.0 * n * _dg(n * (z[2] * z[2] + z[3] * z[3] - 1.0), p)
    out[0] = -ay * z[2]
    out[1] = -ay * z[3]
    out[2] = ax * z[0]
    out[3] = ax * z[1]
    out[4] = 0.5 * (z[0] * out[2] + z[1] * out[3] - z[2] * out[0] - z[3] * out[1])


@nb.njit(cache=True)
def _symmetry_indicator(z, n, p):
    # d/dt (x . y); negative on entry to the corner, positive on exit
    ax = 2.0 * n * _dg(n * (z[0] * z[0] + z[1] * z[1] - 1.0), p)
    ay = 2.0 * n * _dg(n * (z[2] * z[2] + z[3] * z[3] - 1.0), p)
    return ax * (z[0] * z[0] + z[1] * z[1]) - ay * (z[2] * z[2] + z[3] * z[3])


@nb.njit(cache=True)
def _step(z, f0, h, n, p, A, B, K, znew, tmp):
    for i in range(DIM):
        K[0, i] = f0[i]
    for s in range(1, N_STAGES):
        for i in range(DIM):
            acc = 0.0
            for j in range(s):
                acc += A[s, j] * K[j, i]
            tmp[i] = z[i] + h * acc
        rhs(tmp, n, p, K[s])
    for i in range(DIM):
        acc = 0.0
        for j in range(N_STAGES):
            acc += B[j] * K[j, i]
        znew[i] = z[i] + h * acc
    rhs(znew, n, p, K[N_STAGES])


@nb.njit(cache=True)
def _error_norm(z, znew, K, h, rtol, atol, E3, E5):
    e5 = 0.0
    e3 = 0.0
    for i in range(DIM):
        scale = atol + rtol * max(abs(z[i]), abs(znew[i]))
        a5 = 0.0
        a3 = 0.0
        for j in range(N_STAGES + 1):
            a5 += E5[j] * K[j, i]
            a3 += E3[j] * K[j, i]
        e5 += (a5 / scale) ** 2
        e3 += (a3 / scale) ** 2
    if e5 == 0.0 and e3 == 0.0:
        return 0.0
    return abs(h) * e5 / math.sqrt((e5 + 0.01 * e3) * DIM)


@nb.njit(cache=True)
def _dense_coefficients(z, znew, f0, h, n, p, A, C, D, K, tmp, F):
    # three extra stages, then the degree-7 interpolant of scipy's DOP853
    for s in range(N_STAGES + 1, 16):
        for i in range(DIM):
            acc = 0.0
            for j in range(s):
                acc += A[s, j] * K[j, i]
            tmp[i] = z[i] + h * acc
        rhs(tmp, n, p, K[s])
    for i in range(DIM):
        dy = znew[i] - z[i]
        F[0, i] = dy
        F[1, i] = h * f0[i] - dy
        F[2, i] = 2.0 * dy - h * (K[N_STAGES, i] + f0[i])
        for r in range(4):
            acc = 0.0
            for j in range(16):
                acc += D[r, j] * K[j, i]
            F[3 + r, i] = h * acc
    return F


@nb.njit(cache=True)
def _exit_value(z, which):
    if which == 0:
        return z[0] * z[0] + z[1] * z[1] - 1.0
    return z[2] * z[2] + z[3] * z[3] - 1.0


@nb.njit(cache=True)
def _grow(arr, size):
    shape = (size,) + arr.shape[1:]
    out = np.empty(shape, dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@nb.njit(cache=True)
def corner_transit(z0, n, p, rtol, atol, t_max, want_dense, max_steps, A, B, C, E3, E5, D):
    """Integrate from ``z0`` until |x| or |y| crosses 1 downward, or ``t_max``.

    Returns ``(status, t, z, t_mid, step_t, step_z, dense_t, dense_h,
    dense_y, dense_F)``.  ``t_mid`` is the first upward zero of d/dt(x . y)
    (nan if none was seen); the dense arrays are empty unless requested.
    """
    z = z0.copy()
    f0 = np.empty(DIM)
    rhs(z, n, p, f0)
    K = np.empty((16, DIM))
    K2 = np.empty((16, DIM))
    znew = np.empty(DIM)
    zprobe = np.empty(DIM)
    tmp = np.empty(DIM)
    F = np.empty((7, DIM))

    cap = 64
    step_t = np.empty(cap)
    step_z = np.empty((cap, DIM))
    dcap = 64 if want_dense else 0
    dense_t = np.empty(dcap)
    dense_h = np.empty(dcap)
    dense_y = np.empty((dcap, DIM))
    dense_F = np.empty((dcap, 7, DIM))
    step_t[0] = 0.0
    step_z[0] = z
    n_points = 1
    n_dense = 0

    speed = 0.0
    for i in range(4):
        speed += f0[i] * f0[i]
    h = 1e-3 / math.sqrt(speed + 1e-300)
    t = 0.0
    t_mid = np.nan
    sym_prev = _symmetry_indicator(z, n, p)
    status = TOO_MANY_STEPS
    accepted = 0

    while accepted < max_steps:
        if t >= t_max:
            status = REACHED_TMAX
            break
        if h > t_max - t:
            h = t_max - t
        if h < 1e-14 * max(1.0, abs(t)):
            status = UNDERFLOW
            break
        _step(z, f0, h, n, p, A, B, K, znew, tmp)
        err = _error_norm(z, znew, K, h, rtol, atol, E3, E5)
        if not err <= 1.0:
            if err == err and err < 1e300:
                h *= max(0.2, 0.9 * err ** (-1.0 / 8.0))
            else:
                h *= 0.2
            continue

        ex0 = _exit_value(z, 0)
        ex1 = _exit_value(znew, 0)
        ey0 = _exit_value(z, 1)
        ey1 = _exit_value(znew, 1)
        which = -1
        if ex0 > 0.0 and ex1 <= 0.0:
            which = 0
        elif ey0 > 0.0 and ey1 <= 0.0:
            which = 1

        if which >= 0:
            # Illinois iteration on the step length
            lo = 0.0
            hi = h
            elo = ex0 if which == 0 else ey0
            ehi = ex1 if which == 0 else ey1
            side = 0
            hm = h
            for _ in range(200):
                hm = (lo * ehi - hi * elo) / (ehi - elo)
                if not (lo < hm < hi):
                    hm = 0.5 * (lo + hi)
                _step(z, f0, hm, n, p, A, B, K, znew, tmp)
                em = _exit_value(znew, which)
                if em == 0.0 or hi - lo <= 4e-16 * h:
                    break
                if em > 0.0:
                    lo = hm
                    elo = em
                    if side == 1:
                        ehi *= 0.5
                    side = 1
                else:
                    hi = hm
                    ehi = em
                    if side == -1:
                        elo *= 0.5
                    side = -1
            h = hm
            status = which

        sym_new = _symmetry_indicator(znew, n, p)
        if t_mid != t_mid and sym_prev < 0.0 and sym_new >= 0.0:
            lo = 0.0
            hi = h
            slo = sym_prev
            shi = sym_new
            for _ in range(200):
                hm = (lo * shi - hi * slo) / (shi - slo)
                if not (lo < hm < hi):
                    hm = 0.5 * (lo + hi)
                _step(z, f0, hm, n, p, A, B, K2, zprobe, tmp)
                sm = _symmetry_indicator(zprobe, n, p)
                if sm == 0.0 or hi - lo <= 4e-16 * h:
                    break
                if sm < 0.0:
                    lo = hm
                    slo = sm
                else:
                    hi = hm
                    shi = sm
            t_mid = t + hm
        sym_prev = sym_new

        if want_dense:
            if n_dense == dense_t.shape[0]:
                dense_t = _grow(dense_t, 2 * n_dense)
                dense_h = _grow(dense_h, 2 * n_dense)
                dense_y = _grow(dense_y, 2 * n_dense)
                dense_F = _grow(dense_F, 2 * n_dense)
            _dense_coefficients(z, znew, f0, h, n, p, A, C, D, K, tmp, F)
            dense_t[n_dense] = t
            dense_h[n_dense] = h
            dense_y[n_dense] = z
            dense_F[n_dense] = F
            n_dense += 1

        for i in range(DIM):
            z[i] = znew[i]
            f0[i] = K[N_STAGES, i]
        t += h
        accepted += 1
        if n_points == step_t.shape[0]:
            step_t = _grow(step_t, 2 * n_points)
            step_z = _grow(step_z, 2 * n_points)
        step_t[n_points] = t
        step_z[n_points] = z
        n_points += 1

        if which >= 0:
            break
        factor = 10.0 if err == 0.0 else min(10.0, 0.9 * err ** (-1.0 / 8.0))
        h *= factor

    return (status, t, z, t_mid, step_t[:n_points], step_z[:n_points],
            dense_t[:n_dense], dense_h[:n_dense], dense_y[:n_dense], dense_F[:n_dense])


class DenseOutput:
    """Piecewise degree-7 interpolant assembled from accepted steps."""

    def __init__(self, t_old, h, y_old, F):
        self.t_old = np.asarray(t_old)
        self.h = np.asarray(h)
        self.y_old = np.asarray(y_old)
        self.F = np.asarray(F)

    @property
    def t_min(self):
        return float(self.t_old[0])

    @property
    def t_max(self):
        return float(self.t_old[-1] + self.h[-1])

    def shifted(self, dt):
        return DenseOutput(self.t_old + dt, self.h, self.y_old, self.F)

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx = np.clip(np.searchsorted(self.t_old, t, side="right") - 1, 0, len(self.t_old) - 1)
        x = ((t - self.t_old[idx]) / self.h[idx])[:, None]
        y = np.zeros((len(t), self.y_old.shape[1]))
        for i, coef in enumerate(self.F[idx].transpose(1, 0, 2)[::-1]):
            y += coef
            y *= x if i % 2 == 0 else 1 - x
        return y + self.y_old[idx]


def run_corner(z0, n, p, tol, t_max=np.inf, dense=False, max_steps=1_000_000):
    z0 = np.ascontiguousarray(z0, dtype=np.float64)
    if z0.shape != (DIM,):
        raise ValueError("corner state must have five components")
    out = corner_transit(z0, float(n), float(p), tol, tol, float(t_max), dense, max_steps,
                         A_FULL, B, C_FULL, E3, E5, D)
    status, t, z, t_mid, step_t, step_z, dt, dh, dy, dF = out
    return {
        "status": int(status), "t": float(t), "z": z, "t_mid": float(t_mid),
        "step_t": step_t, "step_z": step_z,
        "dense": DenseOutput(dt, dh, dy, dF) if dense and len(dt) else None,
    }
