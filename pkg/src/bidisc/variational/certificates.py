"""Closed-form coefficients of the negativity certificates.

Each certificate bounds ``Psi_c`` on a test family by a quadratic form in
the head coefficients; the family is certified where the form is negative.

* ``I6``: ``A g^2 + B g + C`` in the amplitude ``g`` of the second harmonic.
* ``I4``: ``C + B d + A g^2`` with ``d = |a^2 + b^2|`` (B multiplies ``d``).
* ``I8``: ``C |(a, b)|^2 + A |g|^2``; both coefficients must be negative.
"""

import math
from dataclasses import dataclass, asdict, field

import mpmath
import numpy as np

from .families import GammaProfile

CASES = ("I6", "I4", "I8")


@dataclass(frozen=True)
class CertificateCoefficients:
    case: str
    c: float
    A: float
    B: float
    C: float
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def certificate_coefficients(case, c):
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}")
    if not c > 0:
        raise ValueError("c must be positive")
    pi = math.pi
    q = c / 4
    if case == "I6":
        A = 2 * pi - c / 2 + q * q / (c / 2 + 5 * pi)
        B = -c / 2
        C = pi - c / 2 + q * q / (c / 2 + 4 * pi)
        return CertificateCoefficients(case, c, A, B, C, {"roots": quadratic_roots(A, B, C)})
    if case == "I4":
        A = 2 * pi - c / 2 + q * (c / 2 + 2 * pi) / (3 * c / 4 + 4 * pi) + q * q / (c / 2 + 4 * pi)
        return CertificateCoefficients(case, c, A, -q, pi - c / 2 + q * q / (c / 2 + 3 * pi))
    A = 2 * pi - 3 * c / 4 + q * q / (c / 2 + 6 * pi)
    C = pi - c / 2 + q * q / (c / 2 + 5 * pi)
    return CertificateCoefficients(case, c, A, 0.0, C, {"threshold": float(i8_threshold())})


def quadratic_roots(A, B, C):
    """Real roots of ``A x^2 + B x + C`` in increasing order (empty if none)."""
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    r = math.sqrt(disc)
    return sorted([(-B - r) / (2 * A), (-B + r) / (2 * A)])


def i8_threshold(digits=30):
    """``4 pi (sqrt(109) - 7) / 5`` in high precision."""
    with mpmath.workdps(digits):
        return 4 * mpmath.pi * (mpmath.sqrt(109) - 7) / 5


def i8_threshold_numeric():
    """Smallest ``c`` making both I8 coefficients negative, by root bracketing."""
    from scipy.optimize import brentq

    def worst(c):
        co = certificate_coefficients("I8", c)
        return max(co.A, co.C)

    return brentq(worst, 2 * math.pi, 4 * math.pi, xtol=1e-14, rtol=1e-15)


@dataclass
class GammaCoverage:
    c: float
    profile: dict
    i6_interval: list
    i4_plateau_root: float
    worst_margin: float
    worst_defect: float
    covered: bool

    def to_dict(self):
        return asdict(self)


def verify_gamma_profile(c, profile=GammaProfile(), samples=20001):
    """Check every ``d = |a^2 + b^2|`` in [0, 1] is certified by I6 or I4.

    The margin at ``d`` is ``-min(I6 form, I4 form)`` at ``gamma(d)``;
    coverage needs it positive everywhere.  Also returns the I4 root
    ``(C + A gamma0^2) / |B|`` that the plateau edge must stay below.
    """
    i6 = certificate_coefficients("I6", c)
    i4 = certificate_coefficients("I4", c)
    d = np.linspace(0.0, 1.0, samples)
    d = np.union1d(d, [profile.delta_lo, profile.delta_hi])
    g = profile.of_defect(d)
    form6 = i6.A * g * g + i6.B * g + i6.C
    form4 = i4.C + i4.B * d + i4.A * g * g
    margin = -np.minimum(form6, form4)
    k = int(np.argmin(margin))
    return GammaCoverage(c, asdict(profile), i6.extra["roots"],
                         (i4.C + i4.A * profile.gamma0 ** 2) / -i4.B,
                         float(margin[k]), float(d[k]), bool(np.all(margin > 0)))
