"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``criterion N: PASS|FAIL ...`` line to the terminal
before asserting.
"""
import math
import time

import numpy as np
import pytest

from helpers import random_chain, two_step_fibers, worst_multiset_gap
from holocorr import (TestFunction, birkhoff_exact, birkhoff_mc, compose,
                      graph, invariance_defect, parse_region, pullback, sample_mu)
from holocorr.fibers import raw_fibers
from holocorr.measure import atoms_to_text, estimate_moments, radial_histogram
from holocorr.oracle import run_suite
from holocorr.sphere import pairs_from_complex

START, DEPTH, K = 3.0, 40, 100_000


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


@pytest.fixture(scope="module")
def boyd_run(boyd):
    t0 = time.perf_counter()
    mu = sample_mu(boyd, START, DEPTH, K, workers=1)
    return mu, time.perf_counter() - t0


@pytest.fixture(scope="module")
def square_mu(square):
    return sample_mu(square, START, DEPTH, K)


def test_criterion_1_annulus(capsys, boyd_run):
    mu, elapsed = boyd_run
    r = np.abs(mu.z)
    w = mu.weights
    in_annulus = w[(r >= 0.99) & (r <= 2.01)].sum()
    outside = w[r > 2.01].sum()
    inner = w[(r >= 1) & (r <= 4 / 3)].sum()
    outer = w[(r >= 5 / 3) & (r <= 2)].sum()
    ok = in_annulus >= 0.999 and outside <= 1e-3 and inner >= 0.01 and outer >= 0.01 and elapsed <= 10
    assert report(capsys, 1, ok, f"annulus mass {in_annulus:.5f}, |z|>2.01 mass {outside:.1e}, "
                  f"inner third {inner:.3f}, outer third {outer:.3f}, {elapsed:.2f} s")


def test_criterion_2_adjoint_image(capsys, boyd):
    rng = np.random.default_rng(2)
    x = rng.uniform(2, 10, 1000) * np.exp(2j * np.pi * rng.random(1000))
    num, den = raw_fibers(boyd, *pairs_from_complex(x))
    mod = np.abs(num / den)
    low = mod.min()
    ok = low > math.sqrt(2) - 1e-6 and abs(low - math.sqrt(2)) < 1e-2
    assert report(capsys, 2, ok, f"smallest preimage modulus {low:.6f} (sqrt 2 = {math.sqrt(2):.6f})")


def test_criterion_3_brolin_lyubich(capsys, square, square_mu):
    phi = TestFunction.logabs()
    closed = [math.log(3) * (2 - 2.0 ** (1 - n)) / n for n in range(1, 65)]
    exact = birkhoff_exact(square, phi, START, 12).averages
    err = np.abs(exact - closed[:12]).max()
    mc = birkhoff_mc(square, phi, START, 64, k=10_000)
    gap, hw = abs(mc.averages[-1] - closed[-1]), mc.half_widths[-1]
    moments = np.abs(estimate_moments(square_mu, 4))
    ok = err <= 1e-9 and gap <= 4 * hw and moments.max() < 0.02
    assert report(capsys, 3, ok, f"exact error {err:.1e}; MC A_64 off by {gap:.2e} "
                  f"(half-width {hw:.2e}); max |m_k| {moments.max():.4f}")


def test_criterion_4_invariance(capsys, square, boyd, square_mu, boyd_run):
    mu = boyd_run[0]
    m0 = estimate_moments(square_mu, 4)
    m1 = estimate_moments(pullback(square, square_mu), 4)
    dm = np.abs(m1 - m0).max()
    edges = np.linspace(0.99, 2.01, 65)
    h0 = radial_histogram(mu, edges)
    h1 = radial_histogram(pullback(boyd, mu), edges)
    l1 = np.abs(h1 - h0).sum()
    ok = dm < 0.03 and l1 < 0.03
    assert report(capsys, 4, ok, f"moment change {dm:.4f}; radial histogram L1 change {l1:.4f}")


def test_criterion_5_ergodicity_witness(capsys, square, square_mu):
    half = invariance_defect(square, square_mu, parse_region("halfplane:1,0,0"))
    disk = invariance_defect(square, square_mu, parse_region("disk:0,0,1"))
    ok = abs(half.defect - half.region_mass) <= 0.05 and disk.defect < 1e-3
    assert report(capsys, 5, ok, f"Re z > 0: defect {half.defect:.4f}, mass {half.region_mass:.4f}; "
                  f"unit disk defect {disk.defect:.1e}")


def test_criterion_6_oracle_suite(capsys):
    t0 = time.perf_counter()
    rep = run_suite(count=1000, seed=0, n_max=8, d_max=4, trials=5)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and elapsed <= 60
    assert report(capsys, 6, ok, f"{rep.instances} instances, {rep.measures} measures, "
                  f"{len(rep.failures)} failures, {elapsed:.1f} s"), rep.to_text()


def test_criterion_7_composition(capsys, square):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        a, b = random_chain(rng, 3, 3), random_chain(rng, 3, 3)
        z = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        num, den = pairs_from_complex(z)
        cn, cd = raw_fibers(compose(a, b), num, den)
        tn, td = two_step_fibers(a, b, num, den)
        worst = max(worst, worst_multiset_gap(cn, cd, tn, td))
    (p, _), = compose(square, square).components
    ref = graph([0, 0, 0, 0, 1]).normalized()
    coeff_err = np.abs(p.coeffs - ref.coeffs).max() if p.coeffs.shape == ref.coeffs.shape else np.inf
    ok = worst < 1e-8 and coeff_err < 1e-10
    assert report(capsys, 7, ok, f"worst fiber gap {worst:.1e}; y - x^4 coefficient error {coeff_err:.1e}")


def test_criterion_8_determinism(capsys, boyd, boyd_run):
    one = atoms_to_text(boyd_run[0]).encode()
    eight = atoms_to_text(sample_mu(boyd, START, DEPTH, K, workers=8)).encode()
    ok = one == eight
    assert report(capsys, 8, ok, f"dumps of {len(one)} bytes {'identical' if ok else 'differ'}")

