"""Truncated Fourier series of loops ``[0, 1] -> C^2``.

A loop is ``f(t) = sum_k f_k e^{2 pi i k t}`` with ``f_k in C^2`` and
``|k| <= K``.  The action is ``pi * sum_k k |f_k|^2`` and the Hilbert product is
``<f_0, g_0> + 2 pi sum_k |k| <f_k, g_k>`` (real part of the Hermitian
product).
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FourierLoop:
    coeffs: np.ndarray  # shape (2K + 1, 2), row k + K holds f_k

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[1] != 2 or c.shape[0] % 2 != 1:
            raise ValueError("coefficients must have shape (2K + 1, 2)")
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self):
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def frequencies(self):
        return np.arange(-self.K, self.K + 1)

    @classmethod
    def zeros(cls, K):
        return cls(np.zeros((2 * K + 1, 2), dtype=complex))

    @classmethod
    def from_dict(cls, terms, K=None):
        """Build from ``{k: (a, b)}``."""
        K = max([abs(k) for k in terms] + [0]) if K is None else K
        c = np.zeros((2 * K + 1, 2), dtype=complex)
        for k, v in terms.items():
            if abs(k) > K:
                raise ValueError(f"frequency {k} exceeds truncation {K}")
            c[k + K] = v
        return cls(c)

    @classmethod
    def random(cls, K, rng, scale=1.0):
        shape = (2 * K + 1, 2)
        return cls(scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / math.sqrt(2))

    def coeff(self, k):
        if abs(k) > self.K:
            return np.zeros(2, dtype=complex)
        return self.coeffs[k + self.K]

    def padded(self, K):
        if K < self.K:
            raise ValueError("cannot pad to a smaller truncation")
        c = np.zeros((2 * K + 1, 2), dtype=complex)
        c[K - self.K:K + self.K + 1] = self.coeffs
        return FourierLoop(c)

    def _mask(self, mask):
        return FourierLoop(np.where(mask[:, None], self.coeffs, 0))

    def plus(self):
        return self._mask(self.frequencies > 0)

    def zero(self):
        return self._mask(self.frequencies == 0)

    def minus(self):
        return self._mask(self.frequencies < 0)

    def phase_shift(self, theta):
        """The loop ``t -> f(t + theta)``."""
        return FourierLoop(self.coeffs * np.exp(2j * np.pi * self.frequencies * theta)[:, None])

    def __add__(self, other):
        K = max(self.K, other.K)
        return FourierLoop(self.padded(K).coeffs + other.padded(K).coeffs)

    def __mul__(self, scalar):
        return FourierLoop(self.coeffs * scalar)

    __rmul__ = __mul__

    def __call__(self, t):
        return eval_loop(self, t)


def eval_loop(f, t):
    """Values ``f(t)`` as complex pairs; ``t`` may be scalar or an array."""
    t = np.asarray(t, dtype=float)
    phases = np.exp(2j * np.pi * np.multiply.outer(t, f.frequencies))
    return phases @ f.coeffs


def to_points(values):
    """Complex pairs ``(z1, z2)`` to rows ``(x1, x2, y1, y2)``."""
    values = np.asarray(values)
    return np.concatenate([values.real, values.imag], axis=-1)


def action_A(f):
    return float(np.pi * np.sum(f.frequencies * np.sum(np.abs(f.coeffs) ** 2, axis=1)))


def e_inner(f, g):
    K = max(f.K, g.K)
    a, b = f.padded(K), g.padded(K)
    herm = np.sum(a.coeffs * np.conj(b.coeffs), axis=1).real
    weights = np.where(a.frequencies == 0, 1.0, 2 * np.pi * np.abs(a.frequencies))
    return float(np.sum(weights * herm))


def P_plus(f):
    return f.plus()


def P_zero(f):
    return f.zero()


def P_minus(f):
    return f.minus()


def self_convolution(coeffs):
    """``s_m = sum_{a+b=m} f_a . f_b`` (bilinear, summed over components), m = -2K..2K.

    Works on a batch: ``coeffs`` of shape ``(..., 2K + 1, 2)``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.shape[-2]
    out = np.zeros(coeffs.shape[:-2] + (2 * n - 1,), dtype=complex)
    for a in range(n):
        out[..., a:a + n] += np.einsum("...j,...kj->...k", coeffs[..., a, :], coeffs)
    return out


def re_sq_coefficients(coeffs):
    """Fourier coefficients of ``Re(z1^2 + z2^2)`` for frequencies -2K..2K."""
    s = self_convolution(coeffs)
    return 0.5 * (s + np.conj(s[..., ::-1]))


def fourier_coeff_re_sq(f, order):
    """Coefficient of ``e^{2 pi i order t}`` in ``Re(f_1(t)^2 + f_2(t)^2)``."""
    order = int(order)
    if abs(order) > 4 * f.K:
        raise ValueError(f"|order| must be <= 4K = {4 * f.K}")
    if abs(order) > 2 * f.K:
        return 0j
    return complex(re_sq_coefficients(f.coeffs)[order + 2 * f.K])


def l1_coeff_bound(f, n, nodes=4096):
    """Compare ``integral |f|`` with ``|f_n|`` for a scalar loop.

    ``f`` is either a 1-d array of coefficients for frequencies -K..K or a
    FourierLoop whose first component is used.
    """
    c = f.coeffs[:, 0] if isinstance(f, FourierLoop) else np.asarray(f, dtype=complex)
    K = (len(c) - 1) // 2
    if abs(n) > K:
        raise ValueError(f"|n| must be <= K = {K}")
    nodes = max(nodes, 8 * (2 * K + 1))
    spectrum = np.zeros(nodes, dtype=complex)
    spectrum[np.arange(-K, K + 1) % nodes] = c
    vals = np.fft.ifft(spectrum) * nodes
    lhs = float(np.mean(np.abs(vals)))
    rhs = float(abs(c[n + K]))
    return lhs, rhs, lhs - rhs >= -1e-9
