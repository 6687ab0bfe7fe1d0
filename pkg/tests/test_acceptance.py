"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""
import math
import time

import mpmath
import numpy as np
import pytest

from conftest import random_bogoliubov, random_symmetric, record_criterion
from squeezeflow.bogoliubov import act_on_state, diagonalize, gauge_state, is_pure
from squeezeflow.cli import main
from squeezeflow.flow import (FrequencyProfile, SqueezeParam, circular_distance, fundamental_pairs,
                              propagator, rescale_alpha, squeeze_of_vacuum)
from squeezeflow.geometry import (TangentPair, fd_check, gaussian_curvature_fd, hermitian_form,
                                  hermitian_form_alt)
from squeezeflow.squeezed import fidelity, fock_oracle, occupation_probs, series_amplitudes
from squeezeflow.weber import asymptotic_squeeze, even_solution, m_asymptotic, m_taylor, odd_solution

TOL = 1e-10
INV_SQRT2 = 1 / math.sqrt(2)
UNGAPPED = FrequencyProfile(1.0, 0.0)


@pytest.fixture(scope="module")
def ungapped_runs():
    runs = {}
    for T in (40.0, 80.0):
        start = time.perf_counter()
        tau = squeeze_of_vacuum(propagator(UNGAPPED, -T, T, tol=TOL))
        runs[T] = (tau, time.perf_counter() - start)
    return runs


def test_criterion_01_ungapped_squeezing(ungapped_runs):
    (tau40, secs), (tau80, _) = ungapped_runs[40.0], ungapped_runs[80.0]
    err40 = abs(tau40.tanh_r - INV_SQRT2)
    err80 = abs(tau80.tanh_r - INV_SQRT2)
    ok = err40 <= 5e-3 and err80 < err40 and secs <= 10.0
    assert record_criterion(1, ok, f"|tanh r - 1/sqrt2| = {err40:.2e} (T=40), {err80:.2e} (T=80), "
                                   f"runtime {secs:.2f} s")


def test_criterion_02_ungapped_phase(ungapped_runs):
    tau, _ = ungapped_runs[40.0]
    dist = circular_distance(tau.theta, -40.0 ** 2 - math.pi / 2)
    assert record_criterion(2, dist <= 1e-2, f"phase distance {dist:.2e} at T=40")


def test_criterion_03_occupation_probabilities():
    spec = occupation_probs(SqueezeParam(math.atanh(INV_SQRT2)), 400)
    p = spec.probs
    e0 = abs(p[0] - 0.70710678)
    e2 = abs(p[2] - 0.17677670)
    odd_zero = bool(np.all(p[1::2] == 0))
    total = math.fsum(p)
    ok = e0 <= 1e-8 and e2 <= 1e-8 and odd_zero and total >= 1 - 1e-9
    assert record_criterion(3, ok, f"p0 off by {e0:.1e}, p2 off by {e2:.1e}, odd zero: {odd_zero}, "
                                   f"sum = 1 - {1 - total:.1e}")


def test_criterion_04_gapped_closed_form():
    worst_t = worst_f = 0.0
    for d in (0.25, 0.5, 1.0, 2.0):
        tau = squeeze_of_vacuum(propagator(FrequencyProfile(1.0, math.sqrt(d)), -60.0, 60.0, tol=TOL))
        worst_t = max(worst_t, abs(tau.tanh_r - (1 + math.exp(math.pi * d)) ** -0.5))
        worst_f = max(worst_f, abs(fidelity(tau) - (1 + math.exp(-math.pi * d)) ** -0.5))
    ok = worst_t <= 5e-3 and worst_f <= 5e-3
    assert record_criterion(4, ok, f"max tanh r error {worst_t:.2e}, max fidelity error {worst_f:.2e}")


def test_criterion_05_landau_zener_regime():
    ratios = []
    for d in (2.0, 3.0):
        tau = squeeze_of_vacuum(propagator(FrequencyProfile(1.0, math.sqrt(d)), -60.0, 60.0, tol=TOL))
        ratios.append((1 - fidelity(tau)) / (0.5 * math.exp(-math.pi * d)))
    ok = all(0.9 <= r <= 1.1 for r in ratios)
    assert record_criterion(5, ok, "ratios " + ", ".join(f"{r:.4f}" for r in ratios))


def test_criterion_06_asymmetric_intervals():
    t2 = 40.0
    thetas = [squeeze_of_vacuum(propagator(UNGAPPED, t1, t2, tol=TOL)).theta for t1 in (-20.0, -40.0)]
    spread = circular_distance(*thetas)
    target = max(circular_distance(th, -t2 * t2 - math.pi / 2) for th in thetas)
    ok = spread <= 1e-2 and target <= 1e-2
    assert record_criterion(6, ok, f"spread {spread:.2e}, distance to -t2^2 - pi/2 {target:.2e}")


def test_criterion_07_rate_scaling(ungapped_runs):
    t = rescale_alpha(40.0, 4.0)
    tau4 = squeeze_of_vacuum(propagator(FrequencyProfile(4.0), -t, t, tol=TOL))
    diff = abs(tau4.tanh_r - ungapped_runs[40.0][0].tanh_r)
    assert record_criterion(7, diff <= 1e-3, f"|tanh r(alpha=4) - tanh r(alpha=1)| = {diff:.2e}")


def test_criterion_08_special_function_oracles():
    worst_ode = 0.0
    ts = np.linspace(0.0, 5.0, 51)
    for d in (0.0, 1.0):
        pairs = fundamental_pairs(FrequencyProfile(1.0, math.sqrt(d)), ts, tol=1e-12)
        for t, p in zip(ts, pairs):
            xe, ve = even_solution(t, d)
            xo, vo = odd_solution(t, d)
            worst_ode = max(worst_ode, abs(xe - p.x_plus), abs(ve - p.xdot_plus),
                            abs(xo - p.x_minus), abs(vo - p.xdot_minus))
    worst_band = 0.0
    for d in (0.0, 1.0):
        for a, b in [((1 + 1j * d) / 4, 0.5), ((3 + 1j * d) / 4, 1.5),
                     ((5 + 1j * d) / 4, 1.5), ((7 + 1j * d) / 4, 2.5)]:
            for y in np.linspace(30.0, 40.0, 21):
                s = m_taylor(a, b, 1j * y)
                worst_band = max(worst_band, abs(s - m_asymptotic(a, b, 1j * y)) / max(1.0, abs(s)))
    ok = worst_ode <= 1e-8 and worst_band <= 1e-9
    assert record_criterion(8, ok, f"solutions vs ODE {worst_ode:.2e}, overlap band {worst_band:.2e}")


def test_criterion_09_diagonalization_round_trip():
    rng = np.random.default_rng(9)
    worst = 0.0
    purity_ok = True
    for k in range(100):
        n = int(rng.integers(1, 7))
        rho = np.zeros(n) if k % 4 == 0 else rng.uniform(0.0, 3.0, n)
        state = act_on_state(random_bogoliubov(rng, n), gauge_state(rho))
        _, found = diagonalize(state)
        worst = max(worst, float(np.max(np.abs(found - np.sort(rho)))))
        purity_ok &= is_pure(state) == bool(np.all(rho == 0))
    ok = worst <= 1e-9 and purity_ok
    assert record_criterion(9, ok, f"max occupation error {worst:.2e}, purity detection exact: {purity_ok}")


def test_criterion_10_fock_oracle():
    worst = 0.0
    for r in np.linspace(0.0, 1.2, 13):
        for theta in (0.0, 0.9, 2.1, 4.4):
            tau = SqueezeParam(float(r), theta)
            diff = fock_oracle(tau, 256).amplitudes - series_amplitudes(tau, 256).amplitudes
            worst = max(worst, float(np.max(np.abs(diff))))
    assert record_criterion(10, worst <= 1e-9, f"max coefficient difference {worst:.2e} (r <= 1.2, dim 256)")


def test_criterion_11_geometry():
    rng = np.random.default_rng(11)
    worst_fd = worst_alt = worst_k = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 4))
        Z = random_symmetric(rng, n, rng.uniform(0.0, 0.8))
        t1, t2 = random_symmetric(rng, n), random_symmetric(rng, n)
        worst_fd = max(worst_fd, fd_check(Z, t1, t2))
        tp = TangentPair(Z, t1, t2)
        worst_alt = max(worst_alt, abs(hermitian_form(tp) - hermitian_form_alt(tp)))
    for _ in range(20):
        z = rng.uniform(0.0, 0.95) * np.exp(2j * np.pi * rng.uniform())
        worst_k = max(worst_k, abs(gaussian_curvature_fd(z) + 4.0))
    ok = worst_fd <= 1e-6 and worst_k <= 1e-4 and worst_alt <= 1e-10
    assert record_criterion(11, ok, f"fd residual {worst_fd:.2e}, curvature error {worst_k:.2e}, "
                                    f"two-route difference {worst_alt:.2e}")


def test_criterion_12_determinism(tmp_path):
    outputs = []
    for k in range(3):
        path = tmp_path / f"run{k}.csv"
        code = main(["simulate", "--t-start", "-20", "--t-end", "20", "--out", str(path)])
        outputs.append((code, path.read_bytes()))
    ok = all(code == 0 for code, _ in outputs) and len({body for _, body in outputs}) == 1
    assert record_criterion(12, ok, f"{len(outputs)} simulate runs, byte-identical: {ok}")
