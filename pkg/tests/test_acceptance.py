"""Acceptance gate: one recorded pass/fail line per criterion."""

import statistics
import time

import numpy as np
import pytest

from laxspec.bench import parse_config, run_error_vs_time
from laxspec.errors import MassGateError
from laxspec.hermitian import HermitianMatrix, apply, eigendecompose, propagator
from laxspec.problems import RandomDataSpec, random_initial_data, traveling_wave_coeffs
from laxspec.rk4 import Rk4Config, rk4_evolve
from laxspec.scheme import Equation, evolve_exact, mean_mode_identity
from laxspec.spectral import Kind, SpectralCoeffs, sobolev_error, sobolev_norm

from oracles import scheme_direct

C_SLOW = 15 / (4 * np.pi)
ROUGH = RandomDataSpec(seed=2024, s=2.0, K_ref=1024, theta=0.6)


@pytest.fixture(scope="module")
def rough_data():
    return random_initial_data(ROUGH)


def tw_error(K, t):
    u0 = traveling_wave_coeffs(C_SLOW, 0.0, 128)
    return sobolev_error(evolve_exact("BO", u0, K, t), traveling_wave_coeffs(C_SLOW, t, 128))


def test_1_traveling_wave_exactness(criterion):
    u0 = traveling_wave_coeffs(C_SLOW, 0.0, 128)
    evolve_exact("BO", u0, 64, 0.5)  # JIT warm-up
    start = time.perf_counter()
    got = evolve_exact("BO", u0, 64, 1.0)
    wall = time.perf_counter() - start
    err = sobolev_error(got, traveling_wave_coeffs(C_SLOW, 1.0, 128))
    ok = err <= 1e-10 and wall < 1.0
    assert criterion(1, ok, f"L2 error {err:.2e} (<= 1e-10), runtime {wall * 1e3:.1f} ms (< 1 s)")


def test_2_spectral_decay(criterion):
    errs = [tw_error(K, 1.0) for K in (8, 16, 32)]
    steps = [errs[i] / errs[i + 1] if errs[i + 1] > 1e-12 else np.inf for i in range(2)]
    ok = all(e_next <= 1e-12 or e / e_next >= 10 for e, e_next in zip(errs, errs[1:]))
    detail = "errors " + ", ".join(f"{e:.2e}" for e in errs) + "; factors " + ", ".join(
        "floor" if not np.isfinite(s) else f"{s:.1f}" for s in steps)
    assert criterion(2, ok, detail)


def test_3_algebraic_rate(criterion, rough_data):
    ref = evolve_exact("BO", rough_data, 1024, 1.0)
    Ks = [32, 64, 128, 256]
    errs = [sobolev_error(evolve_exact("BO", rough_data, K, 1.0), ref) for K in Ks]
    slope = float(np.polyfit(np.log(Ks), np.log(errs), 1)[0])
    detail = "errors " + ", ".join(f"{e:.2e}" for e in errs) + f"; slope {slope:.2f} (<= -0.9)"
    assert criterion(3, slope <= -0.9, detail)


def test_4_bounded_error_growth(criterion, rough_data):
    errs = {}
    for t in (0.01, 100.0):
        ref = evolve_exact("BO", rough_data, 1024, t)
        errs[t] = sobolev_error(evolve_exact("BO", rough_data, 64, t), ref)
    ratio = errs[100.0] / errs[0.01]
    detail = f"error {errs[0.01]:.2e} at t=0.01, {errs[100.0]:.2e} at t=100; ratio {ratio:.2f} (<= 2)"
    assert criterion(4, ratio <= 2.0, detail)


def test_5_time_independent_cost(criterion):
    cfg = parse_config(
        "equation = BO\nproblem = traveling-wave\nc = 15/(4*pi)\nK = 64\nt = 1, 100\n"
        "solvers = exact-scheme, rk4\nreference = analytic\nrepeats = 3\n")
    report = run_error_vs_time(cfg)
    wall = {(r.solver, r.t): r.wall_seconds for r in report.rows}
    exact_ratio = wall["exact-scheme", 100.0] / wall["exact-scheme", 1.0]
    rk4_ratio = wall["rk4", 100.0] / wall["rk4", 1.0]
    ok = exact_ratio <= 1.5 and rk4_ratio >= 50
    detail = f"exact-scheme t=100/t=1 wall ratio {exact_ratio:.2f} (<= 1.5), rk4 ratio {rk4_ratio:.1f} (>= 50)"
    assert criterion(5, ok, detail)


def test_6_unitarity_suite(criterion):
    rng = np.random.default_rng(6)
    worst = {"norm": 0.0, "residual": 0.0, "orth": 0.0}
    for _ in range(200):
        K = int(rng.integers(2, 33))
        a = rng.normal(size=(K, K)) + 1j * rng.normal(size=(K, K))
        H = HermitianMatrix((a + a.conj().T) / 2)
        fac = eigendecompose(H)
        scale = max(1.0, H.frobenius())
        v = rng.normal(size=K) + 1j * rng.normal(size=K)
        w = apply(propagator(fac, rng.uniform(0, 100)), v)
        worst["norm"] = max(worst["norm"], abs(np.linalg.norm(w) - np.linalg.norm(v)) / np.linalg.norm(v))
        worst["residual"] = max(worst["residual"], fac.residual(H) / scale)
        worst["orth"] = max(worst["orth"], fac.orthonormality() / scale)
    ok = all(v <= 1e-12 for v in worst.values())
    detail = (f"worst relative norm drift {worst['norm']:.1e}, residual {worst['residual']:.1e}, "
              f"orthonormality {worst['orth']:.1e} (all <= 1e-12)")
    assert criterion(6, ok, detail)


def test_7_small_instance_oracle(criterion):
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(50):
        eq = list(Equation)[i % 4]
        K = int(rng.integers(1, 5))
        amps = 0.4 * (rng.normal(size=K) + 1j * rng.normal(size=K))
        if eq is Equation.BO:
            u = SpectralCoeffs.real_valued(amps)
        else:
            u = SpectralCoeffs.hardy(amps)
            if eq is Equation.CS_FOCUSING and sobolev_norm(u) >= 0.95:
                u = u.scaled(0.9 / sobolev_norm(u))
        t = rng.uniform(0, 10)
        diff = np.abs(evolve_exact(eq, u, K, t).amps - scheme_direct(eq.value, u.amps, K, t))
        worst = max(worst, diff.max())
    assert criterion(7, worst <= 1e-11, f"50 draws over all equations, worst coefficient gap {worst:.1e} (<= 1e-11)")


def test_8_szego_closed_form(criterion):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(20):
        a = complex(rng.normal(), rng.normal())
        t = rng.uniform(0, 50)
        got = evolve_exact("Szego", SpectralCoeffs.hardy([a]), 1, t).amps[0]
        worst = max(worst, abs(got - a * np.exp(-1j * t * abs(a) ** 2)))
    assert criterion(8, worst <= 1e-12, f"20 draws, worst gap {worst:.1e} (<= 1e-12)")


def test_9_rk4_order(criterion):
    K, T = 64, 1.0
    u0 = traveling_wave_coeffs(C_SLOW, 0.0, K)
    exact = traveling_wave_coeffs(C_SLOW, T, K)
    errs = [sobolev_error(rk4_evolve("BO", u0, Rk4Config(K=K, T=T, cfl_C=0.25 / 2 ** j)), exact)
            for j in range(4)]
    ratios = [errs[j] / errs[j + 1] for j in range(3)]
    ok = all(12 <= r <= 20 for r in ratios)
    detail = ("errors " + ", ".join(f"{e:.2e}" for e in errs)
              + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios) + " (each in [12, 20])")
    assert criterion(9, ok, detail)


def test_10_bo_structure(criterion):
    rng = np.random.default_rng(10)
    worst, symmetric = 0.0, True
    for i in range(20):
        u = random_initial_data(RandomDataSpec(seed=100 + i, s=2.0, K_ref=32))
        u = u.with_amps(u.amps + rng.normal() * np.eye(1, 32)[0])
        t = rng.uniform(0, 100)
        worst = max(worst, abs(mean_mode_identity(u, 32, t) - u.amps[0]))
        out = evolve_exact("BO", u, 32, t)
        symmetric &= out.kind is Kind.REAL and out.amps[0].imag == 0.0
    gated = 0
    for mass in (1.0, 1.0 + 1e-9, 2.0):
        try:
            evolve_exact("CS-focusing", SpectralCoeffs.hardy([mass / np.sqrt(2), mass / np.sqrt(2)]), 2, 1.0)
        except MassGateError:
            gated += 1
    ok = worst <= 1e-12 and symmetric and gated == 3
    detail = (f"mean-mode drift {worst:.1e} (<= 1e-12) over 20 runs, conjugate symmetry "
              f"{'exact' if symmetric else 'broken'}, mass gate rejected {gated}/3")
    assert criterion(10, ok, detail)
