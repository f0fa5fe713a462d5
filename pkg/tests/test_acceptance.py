"""Acceptance battery: ten numbered criteria, one pass/fail line each.

Each test prints (and registers for the terminal summary) a single
verdict line. Criterion 8 is asserted honestly even though two of its
three functionals decay only algebraically in the drift rate and
therefore cannot meet the stated factor at s = 10^3; the test states the
measured values and fails.
"""

import math
import time

import numpy as np
import pytest

from conftest import record_criterion
from osceig import asymptotics as asy
from osceig import coefficients as co
from osceig import construction as cn
from osceig import eigensolver as es
from osceig import oracle as orc

PI2 = math.pi ** 2
LAMBDA_NN = 1.0
LAMBDA_ND = 1.0 + 9 * PI2 / 4
LAMBDA_DD = 1.0 + 9 * PI2


def test_criterion_01_analytic_reference_battery():
    t0 = time.perf_counter()
    reaction = co.build_reaction(1.0, 100.0, 0.05)
    refv = es.reference_eigenvalues(reaction, target_elems=2000)
    got = (refv.lambda_nn, refv.lambda_nd, refv.lambda_dn, refv.lambda_dd)
    want = (LAMBDA_NN, LAMBDA_ND, LAMBDA_ND, LAMBDA_DD)
    rel = max(abs(g - w) / w for g, w in zip(got, want))
    elapsed = time.perf_counter() - t0
    ok = rel <= 1e-6 and elapsed < 5.0
    record_criterion(1, ok, f"reference eigenvalues max rel err {rel:.2e} "
                            f"(tol 1e-6), {elapsed:.2f}s (budget 5s)")
    assert ok


def test_criterion_02_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20260823)
    n_cases, n_pass, worst = 20, 0, 0.0
    for i in range(n_cases):
        d = int(rng.integers(1, 4))
        s = float(rng.uniform(0.0, 50.0))
        depth = int(rng.integers(1, 3))
        alpha = float(rng.uniform(0.2, 0.45))
        if rng.uniform() < 0.5:
            sched = co.make_schedule("DD", 1 / 6, alpha,
                                     float(rng.uniform(alpha + 0.05, 0.9)),
                                     depth)
            pot = co.build_sdd(sched)
        else:
            sched = co.make_schedule("NN", 1 / 6, alpha, None, depth)
            pot = co.build_snn(sched)
        reaction = co.build_reaction(float(rng.uniform(0.5, 2.0)),
                                     float(rng.uniform(5.0, 100.0)), 0.05)
        bc = ("N", "N") if rng.uniform() < 0.5 else ("D", "D")
        rec = orc.crosscheck(f"acc2-{i}", pot, reaction, d=d, s=s, bc=bc,
                             tol=1e-6)
        n_pass += rec.ok
        worst = max(worst, rec.rel_err)
    elapsed = time.perf_counter() - t0
    ok = n_pass == n_cases and elapsed < 120.0
    record_criterion(2, ok, f"{n_pass}/{n_cases} Galerkin-vs-shooting cases "
                            f"within 1e-6 (worst {worst:.2e}), "
                            f"{elapsed:.1f}s (budget 120s)")
    assert ok


def test_criterion_03_bounds_invariant(dd_potential, nn_potential,
                                       canonical_reaction, sharp_reaction):
    worst = -math.inf
    n_solves = 0
    for reaction in (canonical_reaction, sharp_reaction):
        lo, hi = reaction.c_star, reaction.c_sup
        for pot in (dd_potential, nn_potential,
                    co.fold_tail(dd_potential, dd_potential.contact_points[1]),
                    co.BumpPotential(), None):
            for s in (0.0, 2.0, 25.0, 150.0):
                lam = es.solve_principal(pot, reaction, s=s,
                                         target_elems=400).eigenvalue
                worst = max(worst, lo - lam, lam - hi)
                n_solves += 1
    ok = worst <= 1e-8
    record_criterion(3, ok, f"c_* <= lambda <= c^* on {n_solves} full-domain "
                            f"solves, worst violation {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_04_ladder_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for alpha in (0.2, 0.25, 0.5):
        for s in (0.0, 1.0, 10.0, 100.0, 1000.0):
            lad = asy.ladder(alpha, s)
            for n in range(1, 21):
                gap = abs(lad.ell(n + 1) - lad.ell(n)
                          - lad.sigma(n) * lad.ell(n))
                worst = max(worst, gap)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 1.0
    record_criterion(4, ok, f"plateau-step identity worst gap {worst:.2e} "
                            f"(tol 1e-12), {elapsed:.3f}s (budget 1s)")
    assert ok


def test_criterion_05_single_bump_limit(canonical_reaction):
    t0 = time.perf_counter()
    bump = co.BumpPotential()  # peak at r = 1/2, where c = 1
    lam = es.solve_principal(bump, canonical_reaction, s=200.0,
                             target_elems=400).eigenvalue
    rel = abs(lam - 1.0)
    elapsed = time.perf_counter() - t0
    ok = rel <= 0.02 and elapsed < 60.0
    record_criterion(5, ok, f"bump-drift eigenvalue {lam:.6f} within "
                            f"{rel:.2e} of c(1/2)=1 at s=200 (tol 2e-2), "
                            f"{elapsed:.2f}s (budget 60s)")
    assert ok


def test_criterion_06_dirichlet_family_limit(sharp_reaction, refvals):
    t0 = time.perf_counter()
    sched = co.make_schedule("DD", 1 / 6, 0.25, 1 / 3, 4)
    m = co.build_sdd(sched, min_amplitude=0.01)
    grid = np.geomspace(1.0, 300.0, 12)
    pts = es.eigenvalue_sweep(m, sharp_reaction, grid, target_elems=600)
    lam_tail = pts[-1].eigenvalue
    rel = abs(lam_tail - refvals.lambda_dd) / refvals.lambda_dd
    last = es.solve_principal(m, sharp_reaction, s=300.0, target_elems=600)
    trace = abs(last.phi_at(1.0 / 3.0)) / float(np.max(np.abs(last.phi)))
    elapsed = time.perf_counter() - t0
    ok = rel <= 0.01 and trace < 0.05 and elapsed < 300.0
    record_criterion(6, ok, f"depth-4 positive-plateau family: lambda(300) = "
                            f"{lam_tail:.4f}, rel err {rel:.2e} vs lambda^DD "
                            f"(tol 1e-2); boundary trace {trace:.2e} "
                            f"(tol 5e-2); {elapsed:.1f}s (budget 300s)")
    assert ok


def test_criterion_07_neumann_family_limit(sharp_reaction, refvals):
    t0 = time.perf_counter()
    sched = co.make_schedule("NN", 1 / 6, 0.25, None, 4)
    m = co.build_snn(sched, min_amplitude=0.03)
    grid = np.geomspace(1.0, 300.0, 12)
    pts = es.eigenvalue_sweep(m, sharp_reaction, grid, target_elems=600)
    lam_tail = pts[-1].eigenvalue
    rel = abs(lam_tail - refvals.lambda_nn) / refvals.lambda_nn
    dominated = True
    gaps = []
    for s, p in zip(grid, pts):
        rep = asy.neumann_test_upper_bound(m, sharp_reaction, refvals,
                                           d=1, s=float(s))
        dominated = dominated and rep.bound >= p.eigenvalue - 1e-8
        gaps.append(rep.bound - refvals.lambda_nn)
    last_decade = [g for s, g in zip(grid, gaps) if s >= grid[-1] / 10.0]
    monotone = all(a > b for a, b in zip(last_decade, last_decade[1:]))
    elapsed = time.perf_counter() - t0
    ok = rel <= 0.01 and dominated and monotone and elapsed < 300.0
    record_criterion(7, ok, f"depth-4 negative-dip family: lambda(300) = "
                            f"{lam_tail:.5f}, rel err {rel:.2e} vs lambda^NN "
                            f"(tol 1e-2); trial bound dominates at all "
                            f"{len(grid)} samples: {dominated}; last-decade "
                            f"gap monotone: {monotone}; {elapsed:.1f}s "
                            f"(budget 300s)")
    assert ok


def test_criterion_08_efg_decay():
    t0 = time.perf_counter()
    e1, f1, g1 = asy.efg(0.25, 1.0)
    e3, f3, g3 = asy.efg(0.25, 1000.0)
    conditions = {
        "E": e1 / e3 >= 1e3 and e3 < 1e-4,
        "F": f1 / f3 >= 1e3 and f3 < 1e-4,
        "G": g1 / g3 >= 1e3 and g3 < 1e-4,
    }
    elapsed = time.perf_counter() - t0
    ok = all(conditions.values()) and elapsed < 1.0
    record_criterion(
        8, ok,
        f"E: {e1:.3e} -> {e3:.3e} ({'ok' if conditions['E'] else 'FAILS'}); "
        f"F: {f1:.3e} -> {f3:.3e} ({'ok' if conditions['F'] else 'FAILS'}); "
        f"G: {g1:.3e} -> {g3:.3e} ({'ok' if conditions['G'] else 'FAILS'}); "
        f"{elapsed:.3f}s. F and G decay only algebraically (about s^-0.77 "
        f"and s^-1), so the 10^3-fold drop below 1e-4 by s=10^3 is "
        f"unattainable for them; E passes.")
    assert ok, ("F and G decay algebraically in s and cannot drop 1000-fold "
                "below 1e-4 by s = 1000; see the verdict line for values")


def test_criterion_09_continuity_bound(canonical_reaction):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    n_pairs, n_fail = 50, 0
    for i in range(n_pairs):
        alpha = float(rng.uniform(0.2, 0.45))
        depth = int(rng.integers(1, 4))
        if rng.uniform() < 0.5:
            sched = co.make_schedule("DD", 1 / 6, alpha,
                                     float(rng.uniform(alpha + 0.05, 0.9)),
                                     depth)
            m1 = co.build_sdd(sched)
            boost = co.build_sdd(sched, min_amplitude=float(
                rng.uniform(0.0, 0.05)))
        else:
            sched = co.make_schedule("NN", 1 / 6, alpha, None, depth)
            m1 = co.build_snn(sched)
            boost = co.build_snn(sched, min_amplitude=float(
                rng.uniform(0.0, 0.05)))
        if rng.uniform() < 0.5:
            m2 = co.fold_tail(m1, float(rng.choice(m1.contact_points)))
        else:
            m2 = boost
        s = float(rng.choice([1.0, 10.0, 50.0]))
        rep = cn.check_continuity_bound(m1, m2, canonical_reaction, s,
                                        target_elems=400)
        n_fail += not rep.ok
    elapsed = time.perf_counter() - t0
    ok = n_fail == 0 and elapsed < 300.0
    record_criterion(9, ok, f"{n_pairs - n_fail}/{n_pairs} randomized pairs "
                            f"satisfy the sup-norm eigenvalue-shift budget, "
                            f"{elapsed:.1f}s (budget 300s)")
    assert ok


def test_criterion_10_counterexample_demo(sharp_reaction):
    t0 = time.perf_counter()
    sched = co.make_schedule("DD", 1 / 6, 0.25, 1 / 3, 10)
    cfg = cn.ConstructionConfig(reaction=sharp_reaction, schedule=sched,
                                depth_max=2, target_elems=600)
    trace, m_hat = cn.run_construction(cfg)
    lam1, lam2 = trace.final_lambdas
    gap1 = abs(lam1 - LAMBDA_DD)
    gap2 = abs(lam2 - LAMBDA_NN)
    budgets_ok = all(st.fold_shift <= st.fold_budget + 1e-6
                     for st in trace.steps)
    elapsed = time.perf_counter() - t0
    ok = (gap1 <= trace.rho / 2 and gap2 <= 2 * trace.rho / 3
          and trace.amplitude >= trace.rho / 2 and budgets_ok
          and elapsed < 600.0)
    record_criterion(10, ok,
                     f"two-fold demo: |lambda(s1)-lambda^DD| = {gap1:.2f} "
                     f"(<= rho/2 = {trace.rho / 2:.2f}), |lambda(s2)-"
                     f"lambda^NN| = {gap2:.2f} (<= 2rho/3 = "
                     f"{2 * trace.rho / 3:.2f}), amplitude "
                     f"{trace.amplitude:.2f} >= rho/2; fold shifts within "
                     f"budget: {budgets_ok}; {elapsed:.1f}s (budget 600s)")
    assert ok
