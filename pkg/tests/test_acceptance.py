"""Acceptance gate: one test per top-level quantitative criterion.

Each test prints a single PASS/FAIL line with the measured quantities before
asserting, so a full run doubles as a checklist.  The Monte Carlo tests are
seeded and deterministic.
"""

import math

import numpy as np
import pytest

from risnoma import (
    SystemConfig,
    algorithm1,
    algorithm2_blind,
    algorithm3_csi,
    baseline_no_bf,
    f_r,
    region_points,
    solve_internal,
    solve_no_csi,
    solve_with_csi,
)
from risnoma.an_beamforming import eav_row_vectors, user_row_vectors
from risnoma.experiments import Experiment, Series, preset, run_experiment
from risnoma.oracles import (
    golden_section_max,
    grid_alpha_best,
    grid_psi_alpha_best,
    phase_grid_best_gain,
)
from risnoma.power_allocation import boundary_alpha_max, boundary_alpha_min

from _util import make_channels


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


# --- shared experiment runs (session-scoped, each preset runs once) -----------

@pytest.fixture(scope="module")
def fig4_rows(tmp_path_factory):
    out = tmp_path_factory.mktemp("acc") / "fig4.csv"
    return run_experiment(preset("fig4"), str(out), workers=4)


@pytest.fixture(scope="module")
def fig7_rows(tmp_path_factory):
    out = tmp_path_factory.mktemp("acc") / "fig7.csv"
    return run_experiment(preset("fig7"), str(out), workers=4)


@pytest.fixture(scope="module")
def fig8_rows(tmp_path_factory):
    out = tmp_path_factory.mktemp("acc") / "fig8.csv"
    return run_experiment(preset("fig8"), str(out), workers=4)


@pytest.fixture(scope="module")
def fig9_rows(tmp_path_factory):
    out = tmp_path_factory.mktemp("acc") / "fig9.csv"
    return run_experiment(preset("fig9"), str(out), workers=4)


# --- criterion 1: alternating optimization near-optimality --------------------

def test_phase_optimization_near_optimal_vs_grid():
    within_half_pct = 0
    within_five_pct = 0
    total = 500
    for k in range(total):
        nr = 2 + (k % 2)
        rng = np.random.default_rng([101, k])
        ch = make_channels(rng, nr, 2)
        _, trace = algorithm1(ch, SystemConfig(ns=2, nr=nr))
        best = phase_grid_best_gain(ch.h_ru2, ch.h_rs)
        gap = (best - trace.h2_values[-1]) / best
        within_half_pct += gap <= 0.005
        within_five_pct += gap <= 0.05
    frac_half = within_half_pct / total
    frac_five = within_five_pct / total
    _report(
        "near-optimality",
        frac_half >= 0.90 and frac_five >= 0.98,
        f"within 0.5%: {frac_half:.1%} (need >= 90%), within 5%: {frac_five:.1%} (need >= 98%)",
    )


# --- criterion 2: monotone bounded convergence ---------------------------------

def test_iteration_monotone_bounded_convergent():
    n = 10_000
    converged = 0
    monotone = True
    bounded = True
    rng = np.random.default_rng(202)
    for _ in range(n):
        nr = int(rng.integers(1, 33))
        ns = int(rng.integers(1, 33))
        ch = make_channels(rng, nr, ns)
        _, trace = algorithm1(ch, SystemConfig(ns=ns, nr=nr))
        vals = np.asarray(trace.h2_values)
        monotone &= bool(np.all(np.diff(vals) >= -1e-9 * max(1.0, vals[-1])))
        bound = np.linalg.norm(ch.h_ru2) ** 2 * np.linalg.norm(ch.h_rs) ** 2
        bounded &= bool(vals[-1] <= bound * (1.0 + 1e-12))
        converged += trace.converged and trace.iterations <= 1000
    _report(
        "monotone-convergence",
        monotone and bounded and converged == n,
        f"monotone={monotone}, bounded={bounded}, converged {converged}/{n}",
    )


# --- criterion 3: null-space exactness ------------------------------------------

def test_noise_directions_exactly_null_and_unit_norm():
    rng = np.random.default_rng(303)
    worst_leak = 0.0
    worst_norm = 0.0
    for k in range(1000):
        ns = int(rng.integers(3, 9))
        nr = int(rng.integers(2, 7))
        m = int(rng.integers(1, ns))
        cfg = SystemConfig(ns=ns, nr=nr, m=m)
        ch = make_channels(rng, nr, ns, m=m)
        ris, _ = algorithm1(ch, cfg)
        an = algorithm2_blind(ch, ris, cfg, rng) if k % 2 else algorithm3_csi(ch, ris, cfg, rng)
        if an.nv == 0:
            continue
        c1, c2 = user_row_vectors(ch, ris)
        worst_leak = max(worst_leak, float(np.max(np.abs(c1 @ an.t))), float(np.max(np.abs(c2 @ an.t))))
        worst_norm = max(worst_norm, float(np.max(np.abs(np.linalg.norm(an.t, axis=0) - 1.0))))
    _report(
        "null-space-exactness",
        worst_leak <= 1e-10 and worst_norm <= 1e-12,
        f"max |c^T t| = {worst_leak:.2e} (<= 1e-10), max |norm-1| = {worst_norm:.2e} (<= 1e-12)",
    )


# --- criterion 4: matched noise direction optimality -----------------------------

def test_matched_direction_reaches_projection_norm():
    rng = np.random.default_rng(404)
    max_dev = 0.0
    beaten = 0
    for _ in range(100):
        ns = int(rng.integers(4, 9))
        m = ns - 2
        cfg = SystemConfig(ns=ns, nr=4, m=m)
        ch = make_channels(rng, 4, ns, m=m)
        ris, _ = algorithm1(ch, cfg)
        an = algorithm3_csi(ch, ris, cfg, rng)
        c1, c2 = user_row_vectors(ch, ris)
        d_all = eav_row_vectors(ch, ris)
        for i, d in enumerate(d_all):
            achieved = abs(d @ an.t[:, i])
            # independent check of the projection norm
            basis = np.linalg.qr(np.column_stack([c1, c2]))[0]
            omega = d - basis @ (np.conj(basis.T) @ d)
            max_dev = max(max_dev, abs(achieved - np.linalg.norm(omega)))
            from risnoma.oracles import random_nullspace_best

            oracle = random_nullspace_best(d, c1, c2, rng, samples=10_000)
            beaten += oracle > achieved + 1e-9
    _report(
        "matched-direction-optimality",
        max_dev <= 1e-10 and beaten == 0,
        f"max | |d^T t| - ||omega|| | = {max_dev:.2e} (<= 1e-10), random beats: {beaten}",
    )


# --- criterion 5: power allocation vs grid oracles --------------------------------

def test_alpha_closed_forms_match_grid():
    rng = np.random.default_rng(505)
    cfg = SystemConfig()
    max_err = 0.0
    checked = 0
    while checked < 1000:
        h1 = float(rng.uniform(0.2, 2.0))
        h2 = h1 + float(rng.uniform(0.5, 8.0))
        if checked % 2 == 0:
            split = solve_internal(h1, h2, cfg)
            psi = 1.0
        else:
            psi = float(rng.uniform(0.1, 1.0))
            split = solve_no_csi(h1, h2, psi, cfg)
        if not split.feasible:
            continue
        best = grid_alpha_best(h1, h2, psi, cfg)
        if best is None:
            continue
        checked += 1
        max_err = max(max_err, abs(split.alpha - best))
    _report(
        "alpha-closed-form",
        max_err <= 1e-6,
        f"max |alpha - grid| = {max_err:.2e} over {checked} instances (<= 1e-6)",
    )


def _joint_instance(rng, kind: str) -> tuple[float, float, float, float]:
    h1 = float(rng.uniform(1.0, 5.0))
    h2 = h1 + float(rng.uniform(1.0, 10.0))
    if kind == "weak":
        he1 = h1 * float(rng.uniform(0.1, 1.0))
    else:
        he1 = h1 * float(rng.uniform(2.0, 10.0))
    he2 = float(rng.uniform(0.01, 1.0))
    return h1, h2, he1, he2


def test_joint_solver_matches_grid():
    rng = np.random.default_rng(606)
    cfg = SystemConfig()
    nv = 3
    cases: dict = {}
    worst_rel = 0.0
    checked = 0
    k = 0
    while checked < 300:
        kind = "weak" if k % 3 == 0 else "strong"
        k += 1
        h1, h2, he1, he2 = _joint_instance(rng, kind)
        split = solve_with_csi(h1, h2, he1, he2, nv, cfg)
        if not split.feasible:
            continue
        best, _, _ = grid_psi_alpha_best(h1, h2, he1, he2, nv, cfg, points=1000)
        if best <= 1e-6:
            continue
        checked += 1
        cases[split.binding_case] = cases.get(split.binding_case, 0) + 1
        achieved = f_r(split.psi, split.alpha, h1, h2, he1, he2, nv, cfg)
        worst_rel = max(worst_rel, (best - achieved) / best)
    _report(
        "joint-solver-vs-grid",
        worst_rel <= 1e-3 and len(cases) == 3,
        f"max relative deficit = {worst_rel:.2e} (<= 1e-3), cases covered: {sorted(cases)}",
    )


# --- criterion 6: boundary corner and stationary points ----------------------------

def test_region_corner_and_stationary_points():
    rng = np.random.default_rng(707)
    cfg = SystemConfig()
    nv = 3
    worst_boundary = 0.0
    worst_g = 0.0
    g_checked = 0
    tried = 0
    while g_checked < 100 and tried < 5000:
        tried += 1
        h1, h2, he1, he2 = _joint_instance(rng, "strong")
        pts = region_points(h1, h2, he1, he2, nv, cfg)
        worst_boundary = max(
            worst_boundary,
            abs(pts.b[1] - boundary_alpha_min(pts.b[0], h2, cfg)),
            abs(pts.c[1] - boundary_alpha_max(pts.c[0], h1, cfg)),
            abs(boundary_alpha_max(pts.d[0], h1, cfg) - pts.d[1]),
            abs(boundary_alpha_min(pts.d[0], h2, cfg) - pts.d[1]),
        )
        if pts.g is None or not (0.0 < pts.g[0] < 1.0):
            continue
        gx = pts.g[0]
        if f_r(gx, pts.g[1], h1, h2, he1, he2, nv, cfg) <= 0.0:
            continue
        g_checked += 1
        ref = golden_section_max(
            lambda s: f_r(s, boundary_alpha_max(s, h1, cfg), h1, h2, he1, he2, nv, cfg),
            max(1e-9, gx - 0.05),
            min(1.0, gx + 0.05),
        )
        worst_g = max(worst_g, abs(gx - ref))
    _report(
        "boundary-and-stationary-points",
        worst_boundary <= 1e-9 and worst_g <= 1e-6 and g_checked == 100,
        f"max boundary residual = {worst_boundary:.2e} (<= 1e-9), "
        f"max |G - numeric| = {worst_g:.2e} (<= 1e-6) on {g_checked} instances",
    )


# --- criterion 7: outage-probability trends across array sizes ----------------------

def test_outage_trends_with_distance_and_array_size(fig4_rows):
    def sop_series(scheme, ns, nr):
        rows = [r for r in fig4_rows if r["scheme"] == scheme and r["ns"] == ns and r["nr"] == nr]
        return [r["sop"] for r in sorted(rows, key=lambda r: r["sweep_value"])]

    opt_16x16 = sop_series("proposed_internal", 16, 16)
    opt_8x16 = sop_series("proposed_internal", 8, 16)
    opt_16x32 = sop_series("proposed_internal", 16, 32)
    base = sop_series("baseline_alg4", 16, 16)

    inversions = {
        name: sum(b < a - 1e-12 for a, b in zip(vals, vals[1:]))
        for name, vals in (
            ("8x16", opt_8x16), ("16x16", opt_16x16), ("16x32", opt_16x32), ("alg4", base),
        )
    }
    monotone_ok = all(v <= 1 for v in inversions.values())
    baseline_ok = all(b > o for b, o in zip(base, opt_16x16))
    drop_nr = float(np.mean(opt_16x16) - np.mean(opt_16x32))
    drop_ns = float(np.mean(opt_8x16) - np.mean(opt_16x16))
    _report(
        "outage-trends",
        monotone_ok and baseline_ok and drop_nr > drop_ns,
        f"inversions={inversions} (<= 1 each), baseline dominates: {baseline_ok}, "
        f"doubling reflectors drop {drop_nr:.4f} > extra antennas drop {drop_ns:.4f}",
    )


# --- criterion 8: noise power split and scheme ordering ------------------------------

def test_optimized_power_split_beats_full_signal(fig8_rows):
    rows = [r for r in fig8_rows if r["scheme"] == "proposed_no_csi"]
    by_psi = {r["sweep_value"]: r["avg_secrecy_rate"] for r in rows}
    best_psi = max(by_psi, key=by_psi.get)
    ok = by_psi[best_psi] >= by_psi[1.0]
    _report(
        "noise-split-helps",
        ok,
        f"best mean rate {by_psi[best_psi]:.4f} at psi={best_psi} >= {by_psi[1.0]:.4f} at psi=1",
    )


def _ordering_leg(rows, hi_scheme, lo_scheme, m):
    def pick(scheme):
        return {
            r["sweep_value"]: (r["avg_secrecy_rate"], r["sem_secrecy_rate"])
            for r in rows
            if r["scheme"] == scheme and r["m"] == m
        }

    hi, lo = pick(hi_scheme), pick(lo_scheme)
    worst = 0.0
    for v in hi:
        mean_hi, sem_hi = hi[v]
        mean_lo, sem_lo = lo[v]
        se = math.hypot(sem_hi, sem_lo)
        worst = max(worst, (mean_lo - mean_hi) / se if se > 0 else 0.0)
    return worst


def test_csi_noise_scheme_ordering(fig9_rows):
    worst_a = _ordering_leg(fig9_rows, "proposed_csi", "scheme4", 10)
    ok_a = worst_a <= 1.0
    _report(
        "ordering-proposed-vs-blind",
        ok_a,
        f"max standardized deficit = {worst_a:.2f} standard errors (<= 1)",
    )


def test_blind_noise_beats_fixed_split_ordering(fig9_rows):
    # Known red: the optimized splits are computed against the strongest
    # eavesdropper only but evaluated against all of them, which favors the
    # fixed half-power split at this geometry.  Asserted as stated anyway.
    worst_b = _ordering_leg(fig9_rows, "scheme4", "scheme6", 10)
    ok_b = worst_b <= 1.0
    _report(
        "ordering-blind-vs-fixed",
        ok_b,
        f"max standardized deficit = {worst_b:.2f} standard errors (<= 1)",
    )


# --- criterion 9: graceful degradation under channel estimation error -----------------

def test_estimation_error_degrades_gracefully(fig7_rows):
    by_t = {r["sweep_value"]: r["avg_rel_error"] for r in fig7_rows}
    ts = sorted(by_t)
    vals = [by_t[t] for t in ts]
    nondecreasing = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    final = by_t[0.1]
    _report(
        "imperfect-csi-degradation",
        nondecreasing and 0.005 <= final <= 0.1,
        f"relative errors {['%.4f' % v for v in vals]} nondecreasing={nondecreasing}, "
        f"value at t=0.1 is {final:.4f} (in [0.005, 0.1])",
    )


# --- criterion 10: byte-level determinism ---------------------------------------------

def test_reruns_and_worker_counts_are_byte_identical(tmp_path):
    exp = Experiment(
        scenario="external_csi",
        sweep_var="d_u2",
        sweep_start=2.5,
        sweep_stop=3.0,
        sweep_step=0.5,
        series=(Series("proposed_csi", 8, 8), Series("scheme6", 8, 8)),
        trials=40,
        seed=99,
        m=3,
    )
    paths = [tmp_path / f"det{i}.csv" for i in range(3)]
    run_experiment(exp, str(paths[0]), workers=1)
    run_experiment(exp, str(paths[1]), workers=1)
    run_experiment(exp, str(paths[2]), workers=3)
    blobs = [p.read_bytes() for p in paths]
    ok = blobs[0] == blobs[1] == blobs[2]
    _report("determinism", ok, "rerun and 1-vs-3 worker outputs byte-identical")
