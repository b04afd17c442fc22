"""Ekeland-Hofer capacity sequences of model domains and the obstructions they give.

Capacities are handled as closed intervals so that a value known only up
to a bracket can still take part in certified comparisons.  Products use
the min-plus rule ``c_k(A x B) = min_{i+j=k} c_i(A) + c_j(B)`` with
``c_0 = 0``, applied to lower and upper ends separately.
"""

import heapq
import math
from dataclasses import dataclass, field

from .config import DEFAULTS

KINDS = ("bidisc", "ball", "ellipsoid", "complex_bidisc", "disc", "product")

# provenance labels carried into reports
SOURCES = {
    "bidisc": "computed spectrum",
    "ball": "external formula",
    "ellipsoid": "external formula",
    "complex_bidisc": "external formula",
    "disc": "external formula",
    "product": "min-plus product rule",
}


@dataclass(frozen=True)
class DomainSpec:
    """A model domain; ``params`` are areas except for ``disc`` and ``complex_bidisc`` (radii)."""
    kind: str
    params: tuple = ()
    factors: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unsupported domain kind {self.kind!r}")
        if any(not (isinstance(v, (int, float)) and v > 0) for v in self.params):
            raise ValueError("domain parameters must be positive numbers")
        if self.kind == "product" and not self.factors:
            raise ValueError("a product needs at least one factor")
        expected = {"bidisc": (0, 1), "ball": (1,), "ellipsoid": (2,), "complex_bidisc": (0, 1),
                    "disc": (1,), "product": (0,)}[self.kind]
        if len(self.params) not in expected:
            raise ValueError(f"{self.kind} takes {' or '.join(map(str, expected))} parameters")

    @classmethod
    def bidisc(cls, scale=None):
        return cls("bidisc", () if scale is None else (scale,))

    @classmethod
    def ball(cls, a):
        return cls("ball", (a,))

    @classmethod
    def ellipsoid(cls, a, b):
        return cls("ellipsoid", (a, b))

    @classmethod
    def complex_bidisc(cls, scale=None):
        return cls("complex_bidisc", () if scale is None else (scale,))

    @classmethod
    def disc(cls, R):
        return cls("disc", (R,))

    @classmethod
    def product(cls, *factors):
        return cls("product", (), tuple(factors))

    @classmethod
    def parse(cls, text):
        """Parse ``kind[:p1[,p2]]`` terms joined by ``*``, e.g. ``bidisc*disc:0.95``."""
        terms = [t.strip() for t in text.split("*")]
        if len(terms) > 1:
            return cls.product(*(cls.parse(t) for t in terms))
        name, _, args = terms[0].partition(":")
        name = name.strip().lower().replace("-", "_")
        try:
            params = tuple(float(a) for a in args.split(",")) if args else ()
        except ValueError:
            raise ValueError(f"malformed parameters in {text!r}") from None
        return cls(name, params)

    def __str__(self):
        if self.kind == "product":
            return "*".join(str(f) for f in self.factors)
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{p:g}" for p in self.params)


@dataclass(frozen=True)
class CapacityInterval:
    k: int
    lower: float
    upper: float
    source: str = ""

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def exact(self):
        return self.lower == self.upper

    def to_record(self):
        return {"k": self.k, "lower": self.lower, "upper": self.upper, "exact": self.exact}


def _ellipsoid_values(a, b, kmax):
    """The ``kmax`` smallest entries of the multiset ``{m a} + {n b}``, m, n >= 1."""
    heap = sorted([(a, 0, 1), (b, 1, 1)])
    out = []
    while len(out) < kmax:
        v, which, m = heapq.heappop(heap)
        out.append(v)
        heapq.heappush(heap, ((m + 1) * (a, b)[which], which, m + 1))
    return out


def _bidisc_bounds(k, scale):
    """Exact at k = 1, 2 and odd k; even k = 2n >= 4 bracketed by its odd neighbours."""
    area = scale * scale
    if k == 2:
        v = 3 * math.sqrt(3) * area
        return v, v
    n, rem = divmod(k + 1, 2)
    if rem == 0:
        return 4 * n * area, 4 * n * area
    n = k // 2
    return 4 * n * area, 4 * (n + 1) * area


def known_capacities(domain, kmax):
    """``c_1 .. c_kmax`` of ``domain`` as intervals."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if isinstance(domain, str):
        domain = DomainSpec.parse(domain)
    kind, p = domain.kind, domain.params
    src = SOURCES[kind]
    if kind == "product":
        return product_capacities(list(domain.factors), kmax)
    if kind == "bidisc":
        scale = p[0] if p else 1.0
        return [CapacityInterval(k, *_bidisc_bounds(k, scale), src) for k in range(1, kmax + 1)]
    if kind == "ball":
        values = [math.ceil(k / 2) * p[0] for k in range(1, kmax + 1)]
    elif kind == "ellipsoid":
        values = _ellipsoid_values(p[0], p[1], kmax)
    else:
        radius = p[0] if p else 1.0
        area = math.pi * radius * radius
        values = [k * area for k in range(1, kmax + 1)]
    return [CapacityInterval(k, v, v, src) for k, v in enumerate(values, start=1)]


def _min_plus(a, b, kmax):
    """Min-plus convolution of two sequences given with their zeroth entry."""
    return [min(a[i] + b[k - i] for i in range(k + 1)) for k in range(kmax + 1)]


def product_capacities(factors, kmax):
    """Capacities of a product, folding the min-plus rule left over the factors."""
    if not factors:
        raise ValueError("need at least one factor")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    lower = upper = None
    for factor in factors:
        seq = known_capacities(factor, kmax)
        lo = [0.0] + [c.lower for c in seq]
        hi = [0.0] + [c.upper for c in seq]
        if lower is None:
            lower, upper = lo, hi
        else:
            lower, upper = _min_plus(lower, lo, kmax), _min_plus(upper, hi, kmax)
    src = SOURCES["product"] if len(factors) > 1 else known_capacities(factors[0], 1)[0].source
    return [CapacityInterval(k, lower[k], upper[k], src) for k in range(1, kmax + 1)]


def _certified_greater(a, b, margin):
    """True when every value in interval ``a`` exceeds every value in ``b``."""
    return a.lower > b.upper + margin


def obstruction_report(source, target, kmax, margin=DEFAULTS.certify_margin):
    """Indices ``k`` where ``c_k(source) > c_k(target)`` is certified.

    Any such ``k`` rules out a symplectic embedding of ``source`` into ``target``.
    """
    if isinstance(source, str):
        source = DomainSpec.parse(source)
    if isinstance(target, str):
        target = DomainSpec.parse(target)
    src = known_capacities(source, kmax)
    tgt = known_capacities(target, kmax)
    violations = [s.k for s, t in zip(src, tgt) if _certified_greater(s, t, margin)]
    return {
        "source": str(source),
        "target": str(target),
        "kmax": kmax,
        "first_violation": violations[0] if violations else None,
        "violations": violations,
        "obstructed": bool(violations),
        "values": [{"k": s.k, "source": [s.lower, s.upper], "target": [t.lower, t.upper]}
                   for s, t in zip(src, tgt)],
        "message": (f"no embedding: c_{violations[0]} of source exceeds target" if violations
                    else f"no obstruction found up to kmax={kmax}"),
    }


def distinguish_products(R, kmax, margin=DEFAULTS.certify_margin):
    """Smallest ``k`` separating ``c_k(bidisc x disc(R))`` from ``c_k(complex bidisc x disc(R))``."""
    if not 0 < R < 1:
        raise ValueError("R must lie in (0, 1)")
    disc = DomainSpec.disc(R)
    left = product_capacities([DomainSpec.bidisc(), disc], kmax)
    right = product_capacities([DomainSpec.complex_bidisc(), disc], kmax)
    separating = None
    for a, b in zip(left, right):
        if _certified_greater(a, b, margin) or _certified_greater(b, a, margin):
            separating = a.k
            break
    return {
        "R": R,
        "disc_area": math.pi * R * R,
        "kmax": kmax,
        "separating_k": separating,
        "bidisc_product": [[c.lower, c.upper] for c in left],
        "complex_product": [[c.lower, c.upper] for c in right],
    }


def separation_scan(areas, kmax):
    """Run :func:`distinguish_products` for each disc area ``pi R^2`` in ``areas``."""
    rows = []
    for area in areas:
        R = math.sqrt(area / math.pi)
        rows.append({"disc_area": area, "R": R,
                     "separating_k": distinguish_products(R, kmax)["separating_k"]})
    separated = [r["disc_area"] for r in rows if r["separating_k"] is not None]
    return {"kmax": kmax, "rows": rows,
            "smallest_separated_area": min(separated) if separated else None}
