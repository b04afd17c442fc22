"""Action spectrum of the Lagrangian bidisc and the billiard orbits behind it.

Every closed billiard trajectory in the unit disc is a regular (possibly
star-shaped) polygon.  Writing the incidence angle as ``theta = pi/2 - w*pi/n``
the polygon has ``n`` sides, winds ``w`` times around the centre and has
perimeter ``2n cos(theta) = 2n sin(w*pi/n)``.  For a fixed winding ``w`` the
perimeters increase with ``n`` and accumulate at ``2*pi*w`` from below, which
is what makes a bounded enumeration possible.
"""

import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .config import DEFAULTS
from .paths import CharacteristicPath, action_of_path

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Bouncing:
    k: int
    n: int

    kind = "bouncing"

    @property
    def theta(self):
        return theta_kn(self.k, self.n)

    @property
    def winding(self):
        # theta = pi/2 - w*pi/n
        return self.n // 2 - self.k if self.n % 2 == 0 else (self.n + 1) // 2 - self.k


@dataclass(frozen=True)
class Gliding:
    n: int

    kind = "gliding"
    k = None


@dataclass(frozen=True)
class SpectrumElement:
    value: float
    label: Bouncing | Gliding

    def to_record(self):
        return {"value": self.value, "label_type": self.label.kind,
                "k": self.label.k, "n": self.label.n}

    def _sort_key(self):
        return (self.value, self.label.kind, self.label.n, self.label.k or 0)


def _index_range(n):
    if n % 2 == 0:
        return range(0, n // 2)
    return range(1, (n - 1) // 2 + 1)


def theta_kn(k, n):
    """The angle with index ``k`` in J_n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if k not in _index_range(n):
        raise ValueError(f"k={k} is outside the index range for n={n}")
    if n % 2 == 0:
        return k * math.pi / n
    return (2 * k - 1) * math.pi / (2 * n)


def theta_set(n):
    """All admissible incidence angles for ``n``-gon orbits, increasing."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    return [theta_kn(k, n) for k in _index_range(int(n))]


def _label_for(w, n):
    return Bouncing(n // 2 - w if n % 2 == 0 else (n + 1) // 2 - w, n)


def default_cap(M):
    return max(64, math.ceil(M / 2) + 8)


def truncated_windings(M):
    """Windings whose values accumulate at or below ``M``; their tails are cut at the n cap."""
    return [w for w in range(1, int(M // 4) + 1) if TWO_PI * w <= M]


def spectrum_up_to(M, include_gliding=True, n_max=None):
    """Every spectrum value ``<= M`` with its label, sorted by value.

    Windings whose accumulation point ``2*pi*w`` exceeds ``M`` are enumerated
    completely.  The remaining ones have infinitely many values below ``M``;
    for those ``n`` stops at ``n_max`` (default ``max(64, ceil(M/2) + 8)``).
    """
    if not M > 0:
        raise ValueError(f"M must be positive, got {M}")
    cap = default_cap(M) if n_max is None else int(n_max)
    limit = M + DEFAULTS.value_tol
    out = []
    # the smallest value of winding w is 4w (n = 2w)
    for w in range(1, int(limit // 4) + 1):
        accumulates = TWO_PI * w <= M
        n = 2 * w
        while True:
            if accumulates and n > cap:
                break
            label = _label_for(w, n)
            value = 2 * n * math.cos(label.theta)
            if value > limit:
                break
            out.append(SpectrumElement(value, label))
            n += 1
    if include_gliding:
        out.extend(SpectrumElement(TWO_PI * j, Gliding(j))
                   for j in range(1, int(limit // TWO_PI) + 1))
    out.sort(key=SpectrumElement._sort_key)
    return out


def group_by_value(elements, tol=DEFAULTS.value_tol):
    """Cluster sorted elements whose values agree within ``tol``."""
    groups = []
    for el in sorted(elements, key=SpectrumElement._sort_key):
        if groups and abs(el.value - groups[-1][0].value) <= tol * max(1.0, el.value):
            groups[-1].append(el)
        else:
            groups.append([el])
    return groups


def kth_smallest(k):
    """The ``k``-th smallest distinct spectrum value.

    Everything below ``2*pi`` has winding one and comes from the regular
    ``n``-gons, ``n = 2, 3, ...``, so an enumeration below ``2*pi`` with the
    cap ``n <= k + 1`` contains exactly ``k`` distinct values.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    groups = group_by_value(spectrum_up_to(TWO_PI, include_gliding=False, n_max=k + 1))
    return groups[k - 1][0]


def _values(elements):
    for el in elements:
        yield el.value if isinstance(el, SpectrumElement) else float(el)


def sigma_truncated(elements, M, eps):
    """Values ``<= M`` farther than ``eps`` from every positive multiple of ``2*pi``."""
    if not M > 0:
        raise ValueError("M must be positive")
    if not 0 < eps < math.pi:
        raise ValueError("eps must lie in (0, pi)")
    kept = []
    for v in _values(elements):
        if v > M:
            continue
        j = max(1, round(v / TWO_PI))
        if abs(v - TWO_PI * j) <= eps:
            continue
        kept.append(v)
    return sorted(kept)


@dataclass
class BilliardOrbit:
    k: int
    n: int
    theta: float
    vertices: np.ndarray
    chord_length: float
    total_length: float
    closure_error: float

    @property
    def closed(self):
        return self.closure_error <= DEFAULTS.orbit_closure

    def perimeter(self):
        z = np.exp(1j * self.vertices)
        return float(np.sum(np.abs(np.roll(z, -1) - z)))


def _wrap(angle):
    return (angle + math.pi) % TWO_PI - math.pi


def billiard_orbit(k, n):
    """The closed billiard polygon with incidence angle ``theta_kn(k, n)``."""
    theta = theta_kn(k, n)
    step = math.pi + 2 * theta
    angles = np.array([(j * step) % TWO_PI for j in range(n)])
    closure = abs(_wrap(n * step))
    chord = 2 * math.cos(theta)
    return BilliardOrbit(k, n, theta, angles, chord, n * chord, closure)


def lift_to_characteristic(orbit):
    """The bidisc characteristic projecting to ``orbit``.

    Sides alternate: on an x-side ``x`` runs along ``-y`` with ``y`` fixed on
    the unit circle, on a y-side ``y`` runs along ``+x``.  The path is
    parametrised at speed 2, so its period equals its action.
    """
    if not orbit.closed:
        raise ValueError(f"orbit is not closed (error {orbit.closure_error:.3g})")
    theta = orbit.theta
    x = np.array([1.0, 0.0])
    y = np.array([math.cos(theta), math.sin(theta)])
    pts = [np.concatenate([x, y])]
    times = [0.0]
    t = 0.0
    for _ in range(orbit.n):
        x = x - 2 * np.dot(x, y) * y
        t += orbit.chord_length / 2
        pts.append(np.concatenate([x, y]))
        times.append(t)
        y = y - 2 * np.dot(y, x) * x
        t += orbit.chord_length / 2
        pts.append(np.concatenate([x, y]))
        times.append(t)
    path = CharacteristicPath.from_samples(times, pts, k=orbit.k, n=orbit.n)
    if path.closure_residual > 1e-9:
        raise ValueError(f"lifted path does not close (residual {path.closure_residual:.3g})")
    path.action = action_of_path(path)
    return path
