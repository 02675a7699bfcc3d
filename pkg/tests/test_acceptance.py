"""Acceptance gate: the headline numerical claims, one printed verdict each.

Every test prints "[acceptance] <name>: PASS|FAIL" through the capture
bypass so the lines always reach the terminal. The three multi-minute
finite-volume runs are marked slow; deselect with -m "not slow" for quick
iterations.
"""

import math

import numpy as np
import pytest

import oracles
from fastshock import analysis, flux, harness, initial_data, profile, solver
from fastshock.solver import Grid1D

# grid for the long stability and steepening runs: the left tail is dead by
# x = -15 for every case here, and 40 keeps the algebraic tail on-grid at
# 2200 cells while halving the diffusion-limited step count of the default
RUN_GRID = {"x_left": -15.0, "x_right": 40.0, "n_cells": 2200}

CLASSIFY_CASES = [
    (1, 0.1), (1, 0.3), (1, 0.5),
    (2, 0.2), (2, 0.5),
    (3, 0.6), (3, 0.8), (3, 0.9),
    (4, 0.5),
]


def _emit(capsys, name, ok, detail=""):
    tail = f" ({detail})" if detail else ""
    with capsys.disabled():
        print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}{tail}")


def _built(example_id, m):
    model = harness.example_flux(example_id, m)
    cls = flux.classify(model)
    return model, cls


def test_classification_closed_forms(capsys):
    worst = 0.0
    for ex, m in CLASSIFY_CASES:
        model, cls = _built(ex, m)
        s_err = abs(cls.speed - oracles.speed_expected(ex, m))
        lam = oracles.lambda_expected(ex, m)
        lam_err = abs(cls.lambda_minus - lam) / lam
        worst = max(worst, s_err, lam_err)
    ok = worst < 1e-10
    _emit(capsys, "classification closed forms", ok, f"worst rel err {worst:.2e}")
    assert ok


def test_tail_decay_rate_fits(capsys):
    cases = [(1, 0.2), (1, 0.5), (2, 0.2), (2, 0.5), (3, 0.6), (3, 0.8), (4, 0.5)]
    worst = 0.0
    for ex, m in cases:
        model, cls = _built(ex, m)
        fit = profile.verify_decay(profile.build_profile(model, cls))
        worst = max(worst, fit.rel_err_q, fit.rel_err_lambda)
    ok = worst <= 0.05
    _emit(capsys, "tail decay rate fits", ok, f"worst rel err {worst:.3f}")
    assert ok


def test_profile_matches_independent_integration(capsys):
    cases = [(1, 0.2), (1, 0.5), (2, 0.2), (2, 0.5), (3, 0.8), (4, 0.5)]
    worst = 0.0
    for ex, m in cases:
        model, cls = _built(ex, m)
        prof = profile.build_profile(model, cls)
        ref = oracles.ode_profile_reference(model.terms, model.m, model.mu,
                                            model.u_minus, cls.speed,
                                            prof.u_star, prof.xi_star, prof.xi)
        worst = max(worst, float(np.max(np.abs(prof.u - ref))))
    ok = worst < 1e-8
    _emit(capsys, "profile vs independent integration", ok, f"sup diff {worst:.2e}")
    assert ok


def test_singular_ratio_convexity_reports(capsys):
    ok = True
    worst_fd = 0.0
    u = np.linspace(0.05, 0.95, 181)
    for ex, m, closed in [(1, 0.1, oracles.k2_expected_ex1),
                          (1, 0.3, oracles.k2_expected_ex1),
                          (1, 0.5, oracles.k2_expected_ex1),
                          (2, 0.2, oracles.k2_expected_ex2)]:
        model, cls = _built(ex, m)
        rep = flux.check_K_convexity(model, cls.speed)
        ok &= rep.holds and rep.min_value >= 0.0
        if ex == 1 and m == 0.5:
            ok &= rep.min_value == 0.0    # the ratio is exactly linear here
        got = flux.k_second_derivative(model, cls.speed, u)
        ok &= bool(np.max(np.abs(got - closed(m, u))) <= 1e-12 * np.abs(closed(m, u)).max())
        g = oracles.g_of(oracles.example_terms(ex, m), oracles.speed_expected(ex, m))
        fd = oracles.fd_second(lambda uu: g(uu) / uu ** (2.0 * m), u, 1e-3)
        worst_fd = max(worst_fd, float(np.max(np.abs(got - fd) / np.maximum(1.0, np.abs(got)))))
    ok &= worst_fd < 1e-4
    _emit(capsys, "convexity of the singular ratio", ok, f"worst fd err {worst_fd:.2e}")
    assert ok


@pytest.mark.slow
def test_front_tracking_at_fixed_resolution(capsys, tmp_path):
    cfg = harness.load_config({"example": 1, "m": 0.3, "initial_data": "profile",
                               "t_end": 5.0})
    report = harness.run_experiment(cfg, out_dir=tmp_path)
    assert report.error is None, report.error
    v = report.verdicts["tracking"]
    ok = v.status == "pass"
    _emit(capsys, "front tracking at fixed resolution", ok,
          f"worst sup {v.value:.3e} vs bound {v.threshold:.3e}")
    assert ok


@pytest.mark.slow
def test_perturbation_contracts_and_energy_stays_bounded(capsys, tmp_path):
    cfg = harness.load_config({"example": 1, "m": 0.3, "t_end": 10.0,
                               "grid": dict(RUN_GRID)})
    report = harness.run_experiment(cfg, out_dir=tmp_path)
    assert report.error is None, report.error
    sup_v = report.verdicts["sup_error_decay"]
    n_v = report.verdicts["n_ratio"]
    ok = sup_v.status == "pass" and n_v.status == "pass"
    _emit(capsys, "perturbation contraction and bounded energy", ok,
          f"sup ratio {sup_v.value:.3f} <= {sup_v.threshold}, "
          f"max energy ratio {n_v.value:.3f} <= {n_v.threshold}")
    assert ok


@pytest.mark.slow
def test_front_steepening_orders_by_m(capsys, tmp_path):
    rep = harness.run_suite([1], m_values=[0.05, 0.1, 0.3, 0.5],
                            out_root=tmp_path, t_end=5.0, cadence=1.0,
                            grid=dict(RUN_GRID), steepening_time=5.0)
    assert all(r.error is None for r in rep.runs), [r.error for r in rep.runs]
    slopes = rep.steepening["slopes"]
    decreasing = all(slopes[i][1] > slopes[i + 1][1] for i in range(len(slopes) - 1))
    ok = rep.steepening["status"] == "pass" and decreasing
    detail = ", ".join(f"m={m:g}: {s:.3f}" for m, s in slopes)
    _emit(capsys, "front steepening orders by m", ok, detail)
    assert ok


def test_conservation_and_positivity_fuzz(capsys):
    rng = np.random.default_rng(0x5EED)
    n_runs, n_steps = 100, 40
    worst_gap = 0.0
    worst_clip = 0.0
    ok = True
    for i in range(n_runs):
        ex = int(rng.integers(1, 5))
        if ex == 3:
            m = float(rng.uniform(0.55, 0.95))
        elif ex == 4:
            m = 0.5
        else:
            m = float(rng.uniform(0.05, 0.5))
        model = harness.example_flux(ex, m)
        grid = Grid1D(float(rng.uniform(-10.0, -4.0)), float(rng.uniform(4.0, 12.0)),
                      int(rng.integers(24, 97)))
        kind = i % 3
        if kind == 0:
            state = solver.init_state(grid, initial_data.example_data(ex, m), model)
        elif kind == 1:
            base = float(rng.uniform(0.2, 1.0))
            amp = float(rng.uniform(0.1, 1.5))
            c = float(rng.uniform(grid.x_left + 1.0, grid.x_right - 1.0))
            w = float(rng.uniform(0.5, 3.0))
            bump = lambda x, b=base, a=amp, c=c, w=w: b + a * np.exp(-((x - c) / w) ** 2)
            state = solver.init_state(grid, bump, model, floor=0.4 * base)
        else:
            value = float(rng.uniform(0.3, 2.0))
            state = solver.init_state(grid, lambda x, v=value: np.full_like(x, v), model)
        start = state.u.copy()
        mass0 = state.mass()
        for _ in range(n_steps):
            rep = solver.step(state, solver.stable_dt(state))
            gap = abs(rep.mass_change
                      - (rep.boundary_flux_integral + rep.clip_correction))
            worst_gap = max(worst_gap, gap / max(1.0, abs(state.mass())))
            ok &= gap <= 1e-12 * max(1.0, abs(state.mass()))
            ok &= float(state.u.min()) >= state.floor * (1.0 - 1e-12)
        worst_clip = max(worst_clip, state.clip_total / mass0)
        ok &= state.clip_total <= 1e-8 * mass0
        if kind == 2:                     # constant states are exact fixed points
            ok &= bool(np.array_equal(state.u, start))
    _emit(capsys, "conservation and positivity fuzz", ok,
          f"{n_runs} runs x {n_steps} steps, worst ledger gap {worst_gap:.2e}, "
          f"worst clip fraction {worst_clip:.2e}")
    assert ok


def test_zero_mass_shift_identities(capsys):
    model, cls = _built(1, 0.3)
    prof = profile.build_profile(model, cls)
    grid = harness.DEFAULT_GRID
    worst_exact = 0.0
    data = initial_data.ProfileData(prof, 0.0)
    state = solver.init_state(grid, data, model)
    worst_exact = abs(analysis.zero_mass_shift(state, prof, data))
    worst_shift = 0.0
    for a in (1.0, -1.0, 3.0, -3.0):
        data = initial_data.ProfileData(prof, a)
        state = solver.init_state(grid, data, model)
        worst_shift = max(worst_shift,
                          abs(analysis.zero_mass_shift(state, prof, data) + a))
    ok = worst_exact < 1e-8 and worst_shift < 1e-6
    _emit(capsys, "zero-mass shift identities", ok,
          f"exact-front |x0| {worst_exact:.2e}, translated |x0 + a| {worst_shift:.2e}")
    assert ok
