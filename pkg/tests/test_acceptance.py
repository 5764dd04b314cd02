"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every tolerance and runtime budget is pinned here; the shared Monte-Carlo
experiment (1000 sequences of 2000 steps at p = 0.5, a = 5, fixed seed) backs
criteria 5, 6 and 7.
"""

import json
import math
import time

import numpy as np
import pytest

from parrondo_maps import (
    Angle,
    CylPoint,
    IfsConfig,
    MapWord,
    OrbitClass,
    apply_f0,
    apply_f1,
    apply_h_k,
    apply_j_k,
    check_cone_condition,
    classify_orbit,
    composition_radial_gain,
    expectation_recurrence_check,
    inverse_f0,
    iterate,
    semistable_1d,
    theoretical_bounds,
    trapping_interval,
)
from parrondo_maps.circle import circle_dist
from parrondo_maps.cli import main as cli_main

MC_SEED = 20240
MC_CONFIG = IfsConfig(p=0.5, a=5.0, seed=MC_SEED, horizon=2000, n_sequences=1000)


def _report(criterion, passed, detail):
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")
    assert passed, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def mc_runs():
    """The shared experiment behind criteria 5-7, with its wall-clock time."""
    from parrondo_maps import run_ifs

    t0 = time.perf_counter()
    runs = [run_ifs(MC_CONFIG, stream=s) for s in range(MC_CONFIG.n_sequences)]
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def mc_stats(mc_runs):
    from parrondo_maps import IfsStats

    runs, _ = mc_runs
    return IfsStats(
        config=MC_CONFIG,
        deltas=np.array([r.delta_total for r in runs]),
        k_counts=np.array([r.k_m for r in runs]),
    )


def test_criterion_1_composition_repulsion_bound(profiles):
    rp, ap = profiles
    t0 = time.perf_counter()
    studies = {
        text: composition_radial_gain(MapWord.parse(text), rp, ap, grid_n=100_000)
        for text in ("f0,f1", "f1,f0")
    }
    elapsed = time.perf_counter() - t0
    ok = all(s.certified and s.min_gain >= 3.0 - 1e-9 for s in studies.values())
    ok = ok and elapsed < 1.0
    detail = (
        f"min gains {[round(s.min_gain, 12) for s in studies.values()]}, "
        f"certified {[s.certified for s in studies.values()]}, {elapsed:.2f}s"
    )
    _report(1, ok, detail)


def _attraction_traces(profiles):
    rp, ap = profiles
    rng = np.random.default_rng(1234)
    starts = [
        CylPoint(rng.uniform(-20.0, 20.0), Angle(rng.uniform(0.0, 1.0)))
        for _ in range(100)
    ]
    traps = {
        "f0": trapping_interval(rp),
        "f1": trapping_interval(rp).translate(0.5),
    }
    steps = {
        "f0": lambda p: apply_f0(rp, ap, p),
        "f1": lambda p: apply_f1(rp, ap, p),
    }
    traces = []
    for name in ("f0", "f1"):
        for start in starts:
            traces.append(iterate(steps[name], start, 500, trap=traps[name]))
    return traces


def test_criterion_2_individual_global_attraction(profiles):
    t0 = time.perf_counter()
    traces = _attraction_traces(profiles)
    labels = [classify_orbit(trace).label for trace in traces]
    elapsed = time.perf_counter() - t0
    n_attracted = sum(label is OrbitClass.ATTRACTED for label in labels)
    ok = n_attracted == 200 and elapsed < 1.0
    _report(2, ok, f"attracted {n_attracted}/200 orbits within 500 steps, {elapsed:.2f}s")


def test_criterion_2_trailing_gain_near_minus_one(profiles):
    # Stated tolerance: |gain + 1| < 1e-6 from trap entry + 200 steps onward.
    traces = _attraction_traces(profiles)
    worst = 0.0
    for trace in traces:
        n0 = trace.entered_trap_at
        assert n0 is not None
        tail = trace.gains[n0 + 200 :]
        if tail.size:
            worst = max(worst, float(np.max(np.abs(tail + 1.0))))
    _report(
        2,
        worst < 1e-6,
        f"max |gain + 1| after trap entry + 200 steps = {worst:.3e} (tolerance 1e-6)",
    )


def test_criterion_3_homeomorphism_round_trip(profiles):
    rp, ap = profiles
    rng = np.random.default_rng(99)
    t0 = time.perf_counter()
    worst_r = worst_t = 0.0
    for _ in range(10_000):
        p = CylPoint(rng.uniform(-50.0, 50.0), Angle(rng.uniform(0.0, 1.0)))
        back = inverse_f0(rp, ap, apply_f0(rp, ap, p))
        worst_r = max(worst_r, abs(back.r - p.r))
        worst_t = max(worst_t, circle_dist(back.theta, p.theta))
    elapsed = time.perf_counter() - t0
    ok = worst_r < 1e-8 and worst_t < 1e-8 and elapsed < 1.0
    _report(3, ok, f"max round-trip error r {worst_r:.2e}, theta {worst_t:.2e}, {elapsed:.2f}s")


def test_criterion_4_high_dimensional_paradox(profiles):
    rp, ap = profiles
    t0 = time.perf_counter()
    details = []
    ok = True
    for k in (3, 4, 5):
        cone = check_cone_condition(rp, ap, k, n_samples=100_000, seed=0)
        ok = ok and cone.holds and cone.min_gain_jh >= 3.0 - 1e-6
        details.append(f"k={k} holds={cone.holds} min_jh={cone.min_gain_jh:.6f}")
        rng = np.random.default_rng(500 + k)
        for fn in (apply_h_k, apply_j_k):
            for _ in range(100):
                x = rng.standard_normal(k)
                x *= math.exp(rng.uniform(-20.0, 20.0)) / np.linalg.norm(x)
                label, _ = classify_orbit(iterate(lambda p: fn(rp, ap, p), x, 500))
                ok = ok and label is OrbitClass.ATTRACTED
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 10.0
    _report(4, ok, "; ".join(details) + f"; 600 orbits attracted, {elapsed:.1f}s")


def test_criterion_5_ifs_exact_inequality(mc_runs):
    runs, experiment_time = mc_runs
    a = MC_CONFIG.a
    m = MC_CONFIG.pairs
    ok = True
    for run in runs:
        ok = ok and run.delta_total >= a * run.k_m - 2.0 * m
        ok = ok and bool(np.all(run.pair_gains[run.pair_mixed] >= a - 2.0))
        ok = ok and bool(np.all(run.pair_gains[~run.pair_mixed] >= -2.0))
    ok = ok and experiment_time < 30.0
    _report(
        5,
        ok,
        f"1000 sequences satisfy the pairwise and total bounds, experiment {experiment_time:.1f}s",
    )


def test_criterion_6_slln_limit(mc_stats):
    two_pq = 0.5
    tol = 3.0 * math.sqrt(two_pq * (1.0 - two_pq) / MC_CONFIG.pairs)
    dev = abs(mc_stats.mean_mixed_fraction - two_pq)
    check = expectation_recurrence_check(MC_CONFIG, stats=mc_stats)
    ok = dev <= tol and check.per_pair_gain >= check.bound - 3.0 * check.stderr
    _report(
        6,
        ok,
        f"mean k_m/m deviation {dev:.5f} <= {tol:.5f}; per-pair gain "
        f"{check.per_pair_gain:.3f} >= K={check.bound} - 3*SE",
    )


def test_criterion_7_almost_sure_escape(mc_stats):
    frac = mc_stats.escape_fraction
    _report(7, frac >= 0.99, f"escape fraction {frac:.4f} >= 0.99")


def test_criterion_8_admissibility_frontier(tmp_path):
    b_half = theoretical_bounds(0.5, 5.0)
    b_skew = theoretical_bounds(0.9, 5.0)
    exact = abs(b_half.a_min - 4.0) <= 1e-9 and abs(b_skew.a_min - 1.0 / 0.09) <= 1e-9
    out = tmp_path / "sweep.csv"
    code = cli_main(
        [
            "sweep",
            "--p-grid",
            "0.5",
            "--a-grid",
            "4",
            "--horizon",
            "100",
            "--sequences",
            "5",
            "--out",
            str(out),
        ]
    )
    label = out.read_text().splitlines()[3].split(",")[-1]
    ok = exact and code == 0 and label in ("boundary", "inadmissible")
    _report(8, ok, f"a_min exact at p=0.5 and p=0.9; sweep labels (0.5, 4) as {label!r}")


def test_criterion_9_semistable_example():
    points = [-9.0, -1.0, 0.0, 1.0, 2.0]
    exact = all(
        semistable_1d(x, "fog") == (x / 9.0 if x <= 0 else 4.0 * x) for x in points
    )
    composed = all(
        math.isclose(
            semistable_1d(semistable_1d(x, "g"), "f"),
            semistable_1d(x, "fog"),
            rel_tol=1e-15,
            abs_tol=0.0,
        )
        or (x == 0.0 and semistable_1d(semistable_1d(x, "g"), "f") == 0.0)
        for x in points
    )
    _report(9, exact and composed, f"branch values exact at {points}, composition matches")


def test_criterion_10_reproducibility(tmp_path):
    argv = ["ifs", "--seed", "20240", "--horizon", "400", "--sequences", "100"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code_a = cli_main(argv + ["--out", str(a)])
    code_b = cli_main(argv + ["--out", str(b)])
    identical = a.read_bytes() == b.read_bytes()
    ok = code_a == 0 and code_b == 0 and identical
    _report(10, ok, f"two runs byte-identical: {identical}")
