"""Test families of loops on which the functional is shown to be negative.

``W2`` loops are ``(a, b) e^{2 pi i t} + gamma * (conj(a) a^3, conj(b) a^3) / |a|^3 e^{4 pi i t}``
plus a tail of non-positive frequencies, with ``gamma`` a function of the
point ``[a : b]`` of the projective line.  ``W3`` loops are
``(a e^{2 pi i t} + g e^{4 pi i t}, b e^{2 pi i t})`` plus a tail.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np

from .functional import psi_batch
from .loops import FourierLoop


def _tail_array(tail):
    """Tail as an array of shape (K_tail + 1, 2) for frequencies 0, -1, ..., -K_tail."""
    if tail is None:
        return np.zeros((1, 2), dtype=complex)
    if isinstance(tail, dict):
        if any(k > 0 for k in tail):
            raise ValueError("tail frequencies must be <= 0")
        depth = max(-k for k in tail) if tail else 0
        arr = np.zeros((depth + 1, 2), dtype=complex)
        for k, v in tail.items():
            arr[-k] = v
        return arr
    arr = np.asarray(tail, dtype=complex)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("tail array must have shape (K_tail + 1, 2)")
    return arr


def _assemble(v1, v2, tail):
    tail = _tail_array(tail)
    K = max(2, len(tail) - 1)
    c = np.zeros((2 * K + 1, 2), dtype=complex)
    c[K + 1] = v1
    c[K + 2] = v2
    c[K - np.arange(len(tail))] += tail
    return FourierLoop(c)


def quadric_defect(alpha, beta):
    """``|a^2 + b^2| / (|a|^2 + |b|^2)``: 0 at ``[1 : +-i]``, 1 on real points."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    norm_sq = np.abs(alpha) ** 2 + np.abs(beta) ** 2
    if np.any(norm_sq == 0):
        raise ValueError("(alpha, beta) must be nonzero")
    return np.abs(alpha ** 2 + beta ** 2) / norm_sq


@dataclass(frozen=True)
class GammaProfile:
    gamma0: float = 0.23
    delta_lo: float = 0.49
    delta_hi: float = 0.6

    def __post_init__(self):
        if not 0 < self.delta_lo < self.delta_hi:
            raise ValueError("need 0 < delta_lo < delta_hi")

    def of_defect(self, d):
        d = np.asarray(d, dtype=float)
        frac = np.clip((self.delta_hi - d) / (self.delta_hi - self.delta_lo), 0.0, 1.0)
        out = self.gamma0 * frac
        return float(out) if out.ndim == 0 else out

    def __call__(self, alpha, beta):
        return self.of_defect(quadric_defect(alpha, beta))


def gamma_profile(alpha, beta, gamma0=0.23, delta_lo=0.49, delta_hi=0.6):
    return GammaProfile(gamma0, delta_lo, delta_hi)(alpha, beta)


def second_harmonic(alpha, beta, gamma):
    """The frequency-2 coefficient of a W2 loop."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    gamma = np.asarray(gamma, dtype=float)
    mod = np.abs(alpha)
    if np.any((mod == 0) & (gamma != 0)):
        raise ValueError("alpha = 0 needs gamma = 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        phase = np.where(mod > 0, alpha ** 3 / mod ** 3, 0)
    return np.stack([gamma * np.conj(alpha) * phase, gamma * np.conj(beta) * phase], axis=-1)


def build_W2_element(alpha, beta, tail=None, profile=GammaProfile(), gamma=None):
    """A W2 loop; ``gamma`` overrides the profile value when given."""
    g = profile(alpha, beta) if gamma is None else gamma
    return _assemble((alpha, beta), second_harmonic(alpha, beta, g), tail)


def build_W3_element(alpha, beta, gamma, tail=None):
    return _assemble((alpha, beta), (gamma, 0), tail)


def _complex_normal(rng, shape):
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / math.sqrt(2)


def _random_tails(rng, count, K_tail, head_energy, tail_scale):
    """Tails whose E-norm is a random fraction (biased small) of ``tail_scale`` times the head's."""
    tails = _complex_normal(rng, (count, K_tail + 1, 2))
    weights = np.r_[1.0, 2 * np.pi * np.arange(1, K_tail + 1)]
    energy = np.sum(weights[None, :, None] * np.abs(tails) ** 2, axis=(1, 2))
    target = tail_scale * rng.random(count) ** 2 * np.sqrt(head_energy)
    return tails * (target / np.sqrt(energy))[:, None, None]


def _sample_w2_heads(rng, count, profile):
    heads = _complex_normal(rng, (count, 2))
    # half the samples are pulled towards [1 : +-i] where the second harmonic is on
    near = rng.random(count) < 0.5
    sign = np.where(rng.random(count) < 0.5, 1j, -1j)
    spread = rng.random(count)[:, None] * 0.6
    target = np.stack([np.ones(count), sign], axis=-1) / math.sqrt(2)
    heads = np.where(near[:, None], target + spread * heads, heads)
    heads /= np.linalg.norm(heads, axis=1)[:, None]
    gamma = profile(heads[:, 0], heads[:, 1])
    return heads, gamma


@dataclass
class ScanReport:
    family: str
    c: float
    samples: int
    K_tail: int
    seed: int
    max_psi: float
    violations: int
    argmax: dict
    note: str = "sampling evidence, not a proof"

    def to_dict(self):
        return asdict(self)


def _pairs(z):
    return [[float(v.real), float(v.imag)] for v in np.ravel(z)]


def negativity_scan(family, c, samples=10_000, K_tail=8, seed=0, tail_scale=1.0,
                    profile=GammaProfile(), batch=2000):
    """Evaluate ``Psi_c`` on random members of a family and report the largest value.

    Heads are normalised (``|a|^2 + |b|^2 = 1`` for W2, ``|a|^2 + |b|^2 + |g|^2 = 1``
    for W3); the functional is 2-homogeneous so nothing is lost.  A tenth of
    the samples carry no tail at all.
    """
    if family not in ("W2", "W3"):
        raise ValueError(f"unknown family {family!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    K = max(2, K_tail)
    best = (-math.inf, None)
    violations = 0
    done = 0
    while done < samples:
        count = min(batch, samples - done)
        coeffs = np.zeros((count, 2 * K + 1, 2), dtype=complex)
        if family == "W2":
            heads, gamma = _sample_w2_heads(rng, count, profile)
            coeffs[:, K + 1] = heads
            coeffs[:, K + 2] = second_harmonic(heads[:, 0], heads[:, 1], gamma)
            head_energy = 2 * np.pi * (1 + 2 * gamma ** 2)
            extra = gamma
        else:
            heads = _complex_normal(rng, (count, 3))
            heads /= np.linalg.norm(heads, axis=1)[:, None]
            coeffs[:, K + 1] = heads[:, :2]
            coeffs[:, K + 2, 0] = heads[:, 2]
            head_energy = 2 * np.pi * (1 + np.abs(heads[:, 2]) ** 2)
            extra = None
        tails = _random_tails(rng, count, K_tail, head_energy, tail_scale)
        tails[rng.random(count) < 0.1] = 0
        coeffs[:, K - np.arange(K_tail + 1)] += tails
        values = psi_batch(coeffs, c)
        violations += int(np.sum(values >= 0))
        i = int(np.argmax(values))
        if values[i] > best[0]:
            info = {"index": done + i, "head": _pairs(heads[i]),
                    "tail_norm": float(np.linalg.norm(tails[i]))}
            if extra is not None:
                info["gamma"] = float(extra[i])
            best = (float(values[i]), info)
        done += count
    return ScanReport(family, float(c), samples, K_tail, seed, best[0], violations, best[1])
