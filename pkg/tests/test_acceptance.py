"""Acceptance gate: one test per criterion, each with its runtime budget.

Every test is tagged with ``criterion(number, title)``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from bidisc import capacities, cli, spectrum
from bidisc.dynamics import (conservation, delta_phi_ode, delta_phi_quad, flow_cartesian,
                             shoot_closed)
from bidisc.dynamics.shooting import loop_start
from bidisc.geometry import ApproximantParams, gauge_bidisc
from bidisc.io import strip_timestamp
from bidisc.variational import (certificate_coefficients, i8_threshold, l1_coeff_bound,
                                negativity_scan)

SQRT3 = math.sqrt(3)
C_W2 = 4 * math.sqrt(2)
I8_THRESHOLD = 4 * math.pi * (math.sqrt(109) - 7) / 5


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f} s, budget {seconds} s"


def close_to_displayed(value, displayed, decimals):
    """Agreement with a constant printed to ``decimals`` places, within one unit of the last."""
    return abs(value - displayed) < 10.0 ** -decimals


@pytest.mark.criterion(1, "spectrum anchors and the gap (2pi, 8.6466) holds only 8")
def test_spectrum_anchors():
    with budget(1.0):
        assert abs(spectrum.kth_smallest(1).value - 4) <= 1e-12
        assert abs(spectrum.kth_smallest(2).value - 3 * SQRT3) <= 1e-12
        els = spectrum.spectrum_up_to(I8_THRESHOLD, n_max=64)
        in_gap = [e for e in els if 2 * math.pi < e.value < I8_THRESHOLD]
        groups = spectrum.group_by_value(in_gap)
    assert in_gap
    assert all(abs(e.value - 8) <= 1e-12 for e in in_gap)
    assert len(groups) == 1


@pytest.mark.criterion(2, "bidisc gauge equals max(|x|^2, |y|^2) on 1e5 points")
def test_gauge_identity():
    with budget(1.0):
        rng = np.random.default_rng(2024)
        pts = rng.normal(size=(100_000, 4)) * rng.uniform(0.1, 3, size=(100_000, 1))
        oracle = np.maximum(pts[:, 0] ** 2 + pts[:, 1] ** 2, pts[:, 2] ** 2 + pts[:, 3] ** 2)
        err = np.max(np.abs(gauge_bidisc(pts) - oracle) / np.maximum(1, oracle))
    assert err <= 1e-12


@pytest.mark.criterion(3, "det(x, y) and defining function drift <= 100 tol on D_20 up to t=50")
def test_flow_conservation():
    tol = 1e-10
    params = ApproximantParams(20, 3.0)
    with budget(10.0):
        path = flow_cartesian(loop_start(math.pi / 5, params), params, 50.0, tol)
        drift = conservation(path, params)
    assert path.times[-1] == pytest.approx(50.0)
    assert drift["det_drift"] <= 100 * tol
    assert drift["energy_drift"] <= 100 * tol


@pytest.mark.criterion(4, "angular defect: quadrature and integration agree to 1e-6")
def test_delta_phi_cross_validation():
    worst = 0.0
    with budget(30.0):
        for n in (10, 50, 100):
            params = ApproximantParams(n)
            for theta in (math.pi / 6, math.pi / 4, math.pi / 3):
                worst = max(worst, abs(delta_phi_quad(theta, params)
                                       - delta_phi_ode(theta, params)))
    assert worst <= 1e-6


@pytest.mark.criterion(5, "shooting actions at n=400 within 2% and closer than at n=100")
def test_shooting_convergence():
    with budget(120.0):
        for k, m in ((0, 2), (1, 3), (1, 4)):
            exact = 2 * m * math.cos(spectrum.theta_kn(k, m))
            coarse = shoot_closed(k, m, ApproximantParams(100))
            fine = shoot_closed(k, m, ApproximantParams(400))
            assert fine.residual <= 1e-10
            assert abs(fine.action - exact) <= 0.02 * exact
            assert abs(fine.action - exact) < abs(coarse.action - exact)


@pytest.mark.criterion(6, "certificate constants, I8 threshold and I6 root bracket")
def test_certificate_arithmetic():
    with budget(1.0):
        i6 = certificate_coefficients("I6", C_W2)
        i4 = certificate_coefficients("I4", C_W2)
        threshold = float(i8_threshold())
    assert close_to_displayed(i6.C, 0.44, 2)
    assert close_to_displayed(i6.B, -2.82, 2)
    assert close_to_displayed(i6.A, 3.56, 2)
    assert close_to_displayed(i4.C, 0.477, 3)
    assert close_to_displayed(-i4.B, 1.41, 2)
    assert close_to_displayed(i4.A, 4.352, 3)
    assert abs(threshold - 8.6466) <= 5e-4
    assert abs(threshold - I8_THRESHOLD) <= 1e-12
    lo, hi = i6.extra["roots"]
    # the bracket is stated to two decimals; the upper root is 0.5792
    assert round(lo, 2) <= 0.22 and round(hi, 2) >= 0.58


@pytest.mark.criterion(7, "Psi_c < 0 on 1e4 samples of W2 and of W3 (sampling evidence)")
def test_negativity_scans():
    with budget(60.0):
        w2 = negativity_scan("W2", C_W2 * 0.999, samples=10_000, K_tail=8, seed=0)
        w3 = negativity_scan("W3", 8.6466 * 1.001, samples=10_000, K_tail=8, seed=0)
    for report in (w2, w3):
        assert report.violations == 0
        assert report.max_psi < 0
        assert "not a proof" in report.note


@pytest.mark.criterion(8, "integral |f| >= |f_n| on 1e3 random loops, all |n| <= K <= 8")
def test_l1_coefficient_bound():
    rng = np.random.default_rng(8)
    worst = math.inf
    with budget(10.0):
        for _ in range(1000):
            K = int(rng.integers(1, 9))
            coeffs = rng.normal(size=2 * K + 1) + 1j * rng.normal(size=2 * K + 1)
            coeffs *= rng.uniform(0, 1, size=2 * K + 1) ** 3
            for n in range(-K, K + 1):
                lhs, rhs, _ = l1_coeff_bound(coeffs, n)
                worst = min(worst, lhs - rhs)
    assert worst >= -1e-9


@pytest.mark.criterion(9, "bidisc capacities, Delta^2 obstruction and product separation")
def test_capacities_and_obstructions():
    with budget(5.0):
        seq = capacities.known_capacities(capacities.DomainSpec.bidisc(), 3)
        obstruction = capacities.obstruction_report(capacities.DomainSpec.complex_bidisc(),
                                                    capacities.DomainSpec.bidisc(), 3)
        sep_095 = capacities.distinguish_products(0.95, 101)["separating_k"]
        sep_205 = capacities.distinguish_products(math.sqrt(2.05 / math.pi), 101)["separating_k"]
        sep_190 = capacities.distinguish_products(math.sqrt(1.9 / math.pi), 101)["separating_k"]
    assert [(c.lower, c.upper) for c in seq] == [(4, 4), (3 * SQRT3, 3 * SQRT3), (8, 8)]
    assert all(c.exact for c in seq)
    assert 3 in obstruction["violations"]
    assert 3 * math.pi > 8
    assert sep_095 == 2
    assert sep_205 is not None and sep_205 % 2 == 1
    assert sep_190 is None


@pytest.mark.criterion(10, "repeated CLI runs with a seed give identical JSON")
def test_cli_determinism(tmp_path):
    runs = [
        ["scan-negativity", "--family", "W2", "--c", "5.65", "--samples", "300", "--seed", "7"],
        ["scan-negativity", "--family", "W3", "--c", "8.7", "--samples", "300", "--seed", "3"],
        ["certify", "--case", "I4"],
        ["capacities", "--domain", "bidisc*disc:0.9", "--kmax", "9", "--format", "json"],
        ["spectrum", "--max", "12", "--format", "json"],
    ]
    for i, argv in enumerate(runs):
        texts = []
        for rep in range(2):
            out = tmp_path / f"run{i}_{rep}.json"
            assert cli.main(argv + ["--out", str(out)]) == 0
            texts.append(out.read_text())
        first, second = (json.dumps(strip_timestamp(t), sort_keys=True) for t in texts)
        assert first == second
        assert strip_timestamp(texts[0])["schema"] == 1
