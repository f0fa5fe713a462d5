"""Schedules, envelopes, potential builders, folds, reactions."""

import json
import math

import numpy as np
import pytest

from osceig import coefficients as co


# ---------------------------------------------------------------- schedules

def test_dd_schedule_normalisation():
    sched = co.make_schedule("DD", 1.0 / 6.0, 0.25, 1.0 / 3.0, 4)
    # theta * (alpha/(1-alpha) + beta/(1-beta)) = 1/3 - delta
    assert sched.theta == pytest.approx(0.2, abs=1e-15)
    assert sched.x[0] == pytest.approx(1.0 / 6.0)
    assert sched.y[0] == pytest.approx(1.0 / 6.0 + 0.2 * 0.25)
    # the infinite ladder tiles exactly up to 1/3
    a, b = sched.alpha, sched.beta
    total = sched.theta * (a / (1 - a) + b / (1 - b))
    assert total == pytest.approx(1.0 / 3.0 - sched.delta, rel=1e-14)


def test_nn_schedule_normalisation():
    sched = co.make_schedule("NN", 1.0 / 6.0, 0.25, None, 4)
    assert sched.theta == pytest.approx(0.25, abs=1e-15)
    assert sched.x[1] == pytest.approx(1.0 / 6.0 + 0.25 / 4.0)
    assert sched.y[1] == pytest.approx(1.0 / 6.0 + 2 * 0.25 / 4.0)


def test_schedule_validation():
    with pytest.raises(co.CoefficientError):
        co.make_schedule("DD", 1.0 / 6.0, 0.5, 0.3, 4)  # beta < alpha
    with pytest.raises(co.CoefficientError):
        co.make_schedule("NN", 1.0 / 6.0, 0.25, 0.5, 4)  # NN takes no beta
    with pytest.raises(co.CoefficientError):
        co.make_schedule("DD", 0.5, 0.25, 1.0 / 3.0, 4)  # delta >= 1/3
    with pytest.raises(co.CoefficientError):
        co.make_schedule("XX", 1.0 / 6.0, 0.25, None, 4)


def test_breakpoints_accumulate_below_one_third(dd_schedule):
    bp = dd_schedule.breakpoints()
    left = bp[bp < 0.5]
    assert np.all(left <= 1.0 / 3.0 + 1e-12)
    assert np.all(np.diff(bp) > 0)
    # mirrored points present
    assert np.any(np.abs(bp - (1.0 - dd_schedule.delta)) < 1e-12)


# ----------------------------------------------------------------- envelope

def test_envelope_dd_values(dd_schedule):
    s = dd_schedule
    mid_dip = 0.5 * (s.x[1] + s.y[1])
    mid_plateau = 0.5 * (s.y[1] + s.x[2])
    assert co.envelope(s, mid_dip) == pytest.approx(-(1.0 / 6.0))
    assert co.envelope(s, mid_plateau) == pytest.approx(2.0 / 6.0)
    mid_plateau_2 = 0.5 * (s.y[2] + s.x[3])
    assert co.envelope(s, mid_plateau_2) == pytest.approx(2.0 / 36.0)
    assert co.envelope(s, 0.5) == 0.0
    assert co.envelope(s, 1.0 - mid_dip) == pytest.approx(-(1.0 / 6.0))
    with pytest.raises(co.CoefficientError):
        co.envelope(s, 0.01)


def test_envelope_nn_values(nn_schedule):
    s = nn_schedule
    mid_peak = 0.5 * (s.y[0] + s.x[1])
    mid_dip = 0.5 * (s.x[1] + s.y[1])
    assert co.envelope(s, mid_peak) == pytest.approx(1.0 / 6.0)
    assert co.envelope(s, mid_dip) == pytest.approx(-2.0 / 6.0)


# ----------------------------------------------------------------- builders

def test_dd_potential_profile(dd_potential, dd_schedule):
    m = dd_potential
    grid = np.linspace(0.0, 1.0, 5001)
    vals = m.value(grid)
    assert np.all(vals >= -1e-14)                       # nonnegative family
    assert np.max(np.abs(m.value(np.linspace(1/3, 2/3, 65)))) == 0.0
    # plateau levels hit exactly 2*(1/6)^max(n,1)
    for n in range(dd_schedule.depth + 1):
        r = 0.5 * (dd_schedule.y[n] + dd_schedule.x[n + 1])
        assert m.value(r) == pytest.approx(
            2.0 * (1.0 / 6.0) ** max(n, 1), rel=1e-12)
    # zero contacts at the dip midpoints
    for z in m.contact_points:
        assert abs(m.value(z)) < 1e-14
        assert abs(m.derivative(z)) < 1e-12


def test_nn_potential_profile(nn_potential, nn_schedule):
    m = nn_potential
    grid = np.linspace(0.0, 1.0, 5001)
    assert np.all(m.value(grid) <= 1e-14)               # nonpositive family
    for n in range(1, nn_schedule.depth + 1):
        r = 0.5 * (nn_schedule.x[n] + nn_schedule.y[n])
        assert m.value(r) == pytest.approx(
            -2.0 * (1.0 / 6.0) ** n, rel=1e-12)


def test_c1_joins(dd_potential, nn_potential):
    assert co.derivative_jump(dd_potential.half) < 1e-10
    assert co.derivative_jump(nn_potential.half) < 1e-10


def test_min_amplitude_floors_levels(dd_schedule, nn_schedule):
    boost = 0.02
    md = co.build_sdd(dd_schedule, min_amplitude=boost)
    mn = co.build_snn(nn_schedule, min_amplitude=boost)
    for n in range(2, dd_schedule.depth + 1):  # deep levels are floored
        r = 0.5 * (dd_schedule.y[n] + dd_schedule.x[n + 1])
        assert md.value(r) == pytest.approx(
            max(2.0 * (1.0 / 6.0) ** n, boost), rel=1e-12)
        rn = 0.5 * (nn_schedule.x[n] + nn_schedule.y[n])
        assert mn.value(rn) == pytest.approx(
            -max(2.0 * (1.0 / 6.0) ** n, boost), rel=1e-12)
    # boosted profiles still belong to their families
    assert co.verify_membership(md, "DD", dd_schedule).ok
    assert co.verify_membership(mn, "NN", nn_schedule).ok
    with pytest.raises(co.CoefficientError):
        co.build_sdd(dd_schedule, min_amplitude=0.5)


# --------------------------------------------------------------- membership

def test_membership_positive(dd_potential, dd_schedule,
                             nn_potential, nn_schedule):
    rep = co.verify_membership(dd_potential, "DD", dd_schedule)
    assert rep.ok and rep.worst_envelope_margin >= -1e-10
    rep = co.verify_membership(nn_potential, "NN", nn_schedule)
    assert rep.ok


def test_membership_negative_controls(dd_schedule, nn_schedule):
    # the NN representative does not dominate the DD envelope from above
    mn = co.build_snn(nn_schedule)
    assert not co.verify_membership(mn, "DD", dd_schedule).ok
    md = co.build_sdd(dd_schedule)
    assert not co.verify_membership(md, "NN", nn_schedule).ok


# -------------------------------------------------------------------- folds

def test_fold_is_c1_and_involutive(dd_potential):
    kappa = dd_potential.contact_points[2]
    folded = co.fold_tail(dd_potential, kappa)
    assert folded.family == "NN"
    assert co.derivative_jump(folded.half) < 1e-10
    grid = np.linspace(0.0, 1.0, 4001)
    back = co.fold_tail(folded, kappa)
    assert back.family == "DD"
    assert np.max(np.abs(back.value(grid) - dd_potential.value(grid))) < 1e-14
    # the fold changes nothing left of kappa and flips the sign beyond
    left = grid[(grid < kappa) | (grid > 1.0 - kappa)]
    mid = grid[(grid > kappa) & (grid < 1.0 - kappa)]
    assert np.max(np.abs(folded.value(left) - dd_potential.value(left))) == 0.0
    assert np.max(np.abs(folded.value(mid) + dd_potential.value(mid))) < 1e-14


def test_fold_rejects_non_contact(dd_potential):
    with pytest.raises(co.CoefficientError):
        co.fold_tail(dd_potential, 0.2)


def test_fold_sup_distance_is_twice_tail_bound(dd_potential):
    for level in range(1, dd_potential.depth):
        kappa = dd_potential.schedule.z[level]
        folded = co.fold_tail(dd_potential, kappa)
        dist = co.sup_distance(dd_potential, folded)
        assert dist <= 2.0 * dd_potential.tail_bound(level) + 1e-12


# ------------------------------------------------------------ serialization

def test_json_round_trip(dd_potential):
    m = dd_potential
    m = co.fold_tail(m, m.contact_points[1])
    data = json.loads(m.dumps())
    rebuilt = co.potential_from_json(data)
    grid = np.linspace(0.0, 1.0, 4001)
    assert rebuilt.family == m.family
    assert np.array_equal(rebuilt.value(grid), m.value(grid))


def test_json_round_trip_with_boost(nn_schedule):
    m = co.build_snn(nn_schedule, min_amplitude=0.03)
    rebuilt = co.potential_from_json(json.loads(m.dumps()))
    grid = np.linspace(0.0, 1.0, 4001)
    assert np.array_equal(rebuilt.value(grid), m.value(grid))


# ---------------------------------------------------------------- reactions

def test_reaction_plateaus_and_ramp():
    c = co.build_reaction(1.0, 100.0, 0.05)
    assert c.value(0.5) == pytest.approx(1.0 + c.offset)
    assert c.value(0.0) == pytest.approx(100.0 + c.offset)
    assert c.c_star == pytest.approx(1.0)
    assert c.c_sup == pytest.approx(100.0)
    # C^1 ramp: continuous at both ends
    grid = np.linspace(0.0, 1.0, 20001)
    vals = c.value(grid)
    assert np.max(np.abs(np.diff(vals))) < 100.0 * (grid[1] - grid[0]) * 40


def test_reaction_symmetry():
    c = co.build_reaction(2.0, 50.0, 0.03)
    grid = np.linspace(0.0, 1.0, 999)
    assert np.allclose(c.value(grid), c.value(1.0 - grid), atol=1e-12)


def test_reaction_auto_shift():
    c = co.build_reaction(1.0, 100.0, 0.05)
    assert c.offset == 0.0          # already positive
    # reaction values used by the solver are strictly positive
    grid = np.linspace(0.0, 1.0, 2001)
    assert np.min(c.value(grid)) > 0.0


def test_verify_h1_examples():
    assert co.verify_h1(co.build_reaction(1.0, 100.0, 0.05)).h1
    assert not co.verify_h1(co.build_reaction(1.0, 50.0, 0.05)).h1


# -------------------------------------------------------------------- bumps

def test_bump_potential_shape():
    b = co.BumpPotential()
    assert b.value(0.5) == pytest.approx(0.25)
    assert b.value(0.1) == 0.0
    assert abs(b.derivative(0.5)) < 1e-14
    r = np.linspace(0.35, 0.65, 101)
    h = 1e-7
    fd = (b.value(r + h) - b.value(r - h)) / (2 * h)
    assert np.allclose(fd, b.derivative(r), atol=1e-5)
