import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from bidisc.capacities import (CapacityInterval, DomainSpec, distinguish_products,
                               known_capacities, obstruction_report, product_capacities,
                               separation_scan)
from bidisc.spectrum import spectrum_up_to

SQRT3 = math.sqrt(3)
areas = st.floats(0.1, 20)


def lowers(seq):
    return [c.lower for c in seq]


def ellipsoid_oracle(a, b, kmax):
    return sorted([m * a for m in range(1, kmax + 1)] + [n * b for n in range(1, kmax + 1)])[:kmax]


def nway_oracle(seqs, k):
    """Direct minimum of c_{i_1} + ... + c_{i_r} over i_1 + ... + i_r = k, with c_0 = 0."""
    best = math.inf
    for split in itertools.product(range(k + 1), repeat=len(seqs)):
        if sum(split) == k:
            best = min(best, sum(s[i - 1] if i else 0.0 for s, i in zip(seqs, split)))
    return best


def test_bidisc_sequence():
    seq = known_capacities(DomainSpec.bidisc(), 7)
    assert [(c.lower, c.upper) for c in seq[:3]] == [(4, 4), (3 * SQRT3, 3 * SQRT3), (8, 8)]
    assert seq[3].lower == 8 and seq[3].upper == 12 and not seq[3].exact
    assert seq[4].lower == seq[4].upper == 12
    assert seq[6].exact and seq[6].lower == 16
    assert all(c.source == "computed spectrum" for c in seq)


def test_bidisc_values_lie_in_the_spectrum():
    values = [e.value for e in spectrum_up_to(20)]
    for c in known_capacities("bidisc", 9):
        if c.exact:
            assert min(abs(v - c.lower) for v in values) <= 1e-12


def test_scaled_bidisc():
    seq = known_capacities(DomainSpec.bidisc(2.0), 2)
    assert lowers(seq) == pytest.approx([16, 12 * SQRT3])


def test_ball_examples():
    assert lowers(known_capacities(DomainSpec.ball(math.pi), 3)) == pytest.approx(
        [math.pi, math.pi, 2 * math.pi])


def test_ellipsoid_matches_enumeration():
    seq = known_capacities(DomainSpec.ellipsoid(4, 3 * SQRT3), 3)
    assert lowers(seq) == pytest.approx([4, 3 * SQRT3, 8])
    for a, b in [(1.0, 2.5), (3.0, 3.0), (0.7, 5.1)]:
        assert lowers(known_capacities(DomainSpec.ellipsoid(a, b), 15)) == pytest.approx(
            ellipsoid_oracle(a, b, 15))


@given(areas, areas)
def test_ellipsoid_enumeration_property(a, b):
    assert lowers(known_capacities(DomainSpec.ellipsoid(a, b), 12)) == pytest.approx(
        ellipsoid_oracle(a, b, 12))


@given(areas)
def test_round_ellipsoid_is_a_ball(a):
    assert lowers(known_capacities(DomainSpec.ellipsoid(a, a), 12)) == pytest.approx(
        lowers(known_capacities(DomainSpec.ball(a), 12)))


def test_disc_and_complex_bidisc():
    R = 0.7
    assert lowers(known_capacities(DomainSpec.disc(R), 3)) == pytest.approx(
        [math.pi * R * R * k for k in (1, 2, 3)])
    assert lowers(known_capacities(DomainSpec.complex_bidisc(), 3)) == pytest.approx(
        [math.pi, 2 * math.pi, 3 * math.pi])


def test_product_examples():
    R = 0.6
    area = math.pi * R * R
    two = product_capacities([DomainSpec.complex_bidisc(), DomainSpec.disc(R)], 2)
    assert two[1].lower == pytest.approx(2 * area)
    bd = product_capacities([DomainSpec.bidisc(), DomainSpec.disc(R)], 2)
    assert bd[1].lower == pytest.approx(min(3 * SQRT3, 4 + area, 2 * area))


def test_single_factor_product_is_the_factor():
    for spec in (DomainSpec.bidisc(), DomainSpec.ball(2.0), DomainSpec.ellipsoid(1, 3)):
        direct = known_capacities(spec, 10)
        prod = product_capacities([spec], 10)
        assert [(c.lower, c.upper) for c in prod] == [(c.lower, c.upper) for c in direct]


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from(["bidisc", "disc:0.8", "ball:2.5", "ellipsoid:1,4"]),
                min_size=2, max_size=3))
def test_product_fold_matches_direct_minimisation(names):
    kmax = 6
    specs = [DomainSpec.parse(n) for n in names]
    seqs = [known_capacities(s, kmax) for s in specs]
    prod = product_capacities(specs, kmax)
    for k in range(1, kmax + 1):
        assert prod[k - 1].lower == pytest.approx(nway_oracle([lowers(s) for s in seqs], k))
        assert prod[k - 1].upper == pytest.approx(
            nway_oracle([[c.upper for c in s] for s in seqs], k))


@given(areas, areas)
def test_product_is_symmetric(a, b):
    x, y = DomainSpec.ball(a), DomainSpec.ellipsoid(b, 2 * b)
    assert lowers(product_capacities([x, y], 8)) == pytest.approx(
        lowers(product_capacities([y, x], 8)))


@given(areas, areas, st.floats(0.05, 0.95))
def test_capacities_are_monotone_and_conformal(a, b, R):
    for spec in (DomainSpec.ellipsoid(a, b), DomainSpec.product(DomainSpec.ball(a),
                                                                DomainSpec.disc(R))):
        seq = lowers(known_capacities(spec, 10))
        assert all(x <= y + 1e-12 for x, y in zip(seq, seq[1:]))
    scaled = lowers(known_capacities(DomainSpec.ellipsoid(2 * a, 2 * b), 10))
    assert scaled == pytest.approx([2 * v for v in lowers(known_capacities(
        DomainSpec.ellipsoid(a, b), 10))])


def test_third_capacity_below_the_gliding_orbit():
    assert known_capacities("bidisc", 3)[2].lower == 8 < 2 * math.pi + 2
    assert 8 > 2 * math.pi


def test_obstruction_examples():
    none = obstruction_report("bidisc", "bidisc", 8)
    assert not none["obstructed"] and none["first_violation"] is None
    report = obstruction_report(DomainSpec.complex_bidisc(), DomainSpec.bidisc(), 3)
    assert report["violations"] == [2, 3]
    assert report["first_violation"] == 2
    assert "no embedding" in report["message"]
    assert not obstruction_report(DomainSpec.ball(4), DomainSpec.bidisc(), 12)["obstructed"]
    # bidisc into a ball of area 4: blocked by c_2 = 3 sqrt 3 > 4
    assert obstruction_report("bidisc", "ball:4", 4)["first_violation"] == 2


def test_obstruction_ignores_overlapping_brackets():
    # c_4 of ball(5) is 10, inside the bracket [8, 12]
    report = obstruction_report("ball:5", "bidisc", 6)
    assert 4 not in report["violations"]


def test_distinguish_products():
    assert distinguish_products(0.95, 101)["separating_k"] == 2
    odd = distinguish_products(math.sqrt(2.05 / math.pi), 101)["separating_k"]
    assert odd == 41
    assert distinguish_products(math.sqrt(1.9 / math.pi), 101)["separating_k"] is None
    with pytest.raises(ValueError):
        distinguish_products(1.2, 10)


def test_separation_scan():
    scan = separation_scan([1.9, 2.05, 2.5], 101)
    assert [r["separating_k"] is not None for r in scan["rows"]] == [False, True, True]
    assert scan["smallest_separated_area"] == 2.05


def test_domain_parse_and_str():
    spec = DomainSpec.parse("bidisc*disc:0.95")
    assert spec.kind == "product"
    assert [f.kind for f in spec.factors] == ["bidisc", "disc"]
    assert str(spec) == "bidisc*disc:0.95"
    assert DomainSpec.parse("Complex-Bidisc").kind == "complex_bidisc"
    assert DomainSpec.parse(str(DomainSpec.ellipsoid(1, 2.5))) == DomainSpec.ellipsoid(1, 2.5)


@pytest.mark.parametrize("text", ["torus", "ball", "ball:-1", "ellipsoid:1", "disc:x",
                                  "ball:1,2"])
def test_domain_validation(text):
    with pytest.raises(ValueError):
        DomainSpec.parse(text)


def test_interval_validation():
    with pytest.raises(ValueError):
        CapacityInterval(1, 2.0, 1.0)
    assert CapacityInterval(1, 1.0, 1.0).to_record()["exact"]
