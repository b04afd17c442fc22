import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from bidisc.errors import BracketError
from bidisc.geometry import (ApproximantParams, Point4, defining_Dn, g_profile, gauge_Dn,
                             gauge_bidisc, grad_defining_Dn, sandwich_check)

P3 = ApproximantParams(10, 3.0)
finite = st.floats(-3, 3, allow_nan=False)
points = arrays(float, 4, elements=finite)


def test_gauge_bidisc_examples():
    assert gauge_bidisc(Point4(1, 0, 0, 0)) == 1
    assert gauge_bidisc(Point4(0, 0, 0, 0)) == 0


def test_params_validation():
    with pytest.raises(ValueError):
        ApproximantParams(0)
    with pytest.raises(ValueError):
        ApproximantParams(3, 1.5)
    with pytest.raises(ValueError):
        ApproximantParams(2.5)


def test_profile_examples():
    assert g_profile(1.0, P3)[0] == 1
    assert g_profile(-0.5, P3)[0] == 0
    value, deriv, inv = g_profile(0.5, P3)
    assert value == pytest.approx(0.125)
    assert deriv == pytest.approx(0.75)
    assert inv == pytest.approx(0.5)
    assert P3.g_inv(0.125) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        P3.g_inv(-0.1)


def test_defining_function_examples():
    n = P3.n
    assert defining_Dn([0, 0, 0, 0], P3) == -1
    assert defining_Dn([math.sqrt(1 + 1 / n), 0, 0, 0], P3) == pytest.approx(0, abs=1e-12)
    s = 1 + float(P3.g_inv(0.5)) / n
    pt = [math.sqrt(s), 0, 0, math.sqrt(s)]
    assert defining_Dn(pt, P3) == pytest.approx(0, abs=1e-12)


def test_gradient_examples():
    n = P3.n
    assert np.all(grad_defining_Dn([0, 0, 0, 0], P3) == 0)
    r = math.sqrt(1 + 1 / n)
    g = grad_defining_Dn([r, 0, 0, 0], P3)
    assert g == pytest.approx([2 * n * 3 * r, 0, 0, 0])


def finite_difference(pt, params, h=1e-6):
    out = np.zeros(4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        out[i] = (defining_Dn(pt + e, params) - defining_Dn(pt - e, params)) / (2 * h)
    return out


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        pt = rng.normal(size=4) * 0.7
        g = grad_defining_Dn(pt, P3)
        fd = finite_difference(pt, P3)
        worst = max(worst, np.max(np.abs(g - fd)) / max(1.0, np.max(np.abs(g))))
    assert worst <= 1e-6


@given(points)
def test_gradient_swap_symmetry(pt):
    swapped = np.r_[pt[2:], pt[:2]]
    g = grad_defining_Dn(pt, P3)
    assert np.allclose(grad_defining_Dn(swapped, P3), np.r_[g[2:], g[:2]])


@given(points)
def test_gauge_identity(pt):
    expected = max(pt[0] ** 2 + pt[1] ** 2, pt[2] ** 2 + pt[3] ** 2)
    assert gauge_bidisc(pt) == pytest.approx(expected, abs=1e-12 * max(1, expected))


@given(points, st.floats(0.01, 10))
def test_gauge_bidisc_homogeneous(pt, lam):
    assert gauge_bidisc(lam * pt) == pytest.approx(lam ** 2 * gauge_bidisc(pt), rel=1e-12,
                                                  abs=1e-300)


@settings(max_examples=200)
@given(points, points, st.floats(0, 1))
def test_defining_function_convex_on_segments(a, b, lam):
    mid = lam * a + (1 - lam) * b
    lhs = defining_Dn(mid, P3)
    rhs = lam * defining_Dn(a, P3) + (1 - lam) * defining_Dn(b, P3)
    assert lhs <= rhs + 1e-10 * max(1.0, abs(rhs))


def test_gauge_Dn_on_boundary():
    n = P3.n
    s = 1 + float(P3.g_inv(0.3)) / n
    t = 1 + float(P3.g_inv(0.7)) / n
    pt = np.array([math.sqrt(s) * 0.6, math.sqrt(s) * 0.8, 0, math.sqrt(t)])
    assert defining_Dn(pt, P3) == pytest.approx(0, abs=1e-12)
    assert gauge_Dn(pt, P3) == pytest.approx(1, abs=1e-10)


@settings(max_examples=50)
@given(points.filter(lambda p: np.max(np.abs(p)) > 1e-3), st.sampled_from([0.5, 2.0, 7.0]))
def test_gauge_Dn_homogeneous(pt, lam):
    assert gauge_Dn(lam * pt, P3) == pytest.approx(lam ** 2 * gauge_Dn(pt, P3), rel=1e-10)


def test_gauge_Dn_sandwich_on_random_points():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(10_000, 4))
    r = gauge_bidisc(pts)
    s = gauge_Dn(pts, P3)
    assert np.all(r / (1 + 1 / P3.n) <= s * (1 + 1e-12))
    assert np.all(s <= r * (1 + 1e-12))


def test_gauge_Dn_rejects_origin():
    with pytest.raises(ValueError):
        gauge_Dn([0, 0, 0, 0], P3)


def test_gauge_Dn_bracket_failure():
    with pytest.raises(BracketError):
        gauge_Dn([1.0, 0, 0, 0], P3, max_iter=3)


@pytest.mark.parametrize("n", [1, 10])
def test_sandwich_check(n):
    report = sandwich_check(ApproximantParams(n), samples=10_000, seed=0)
    assert report.ok
    assert report.to_dict()["samples"] == 10_000


def test_bidisc_boundary_point_inside_Dn():
    pt = np.array([1.0, 0.0, 0.0, 1.0])
    assert defining_Dn(pt, P3) < 0
