"""Shooting oracle: analytic cases and independence from the Galerkin path."""

import math

import numpy as np
import pytest

from osceig import coefficients as co
from osceig import oracle as orc


def test_constant_reaction_neumann():
    # no drift, uniform c: the NN principal eigenfunction is constant
    c = co.build_reaction(2.0, 2.0, 0.05)
    lam = orc.shoot_principal(None, c, d=1, s=0.0, bc=("N", "N"))
    assert lam == pytest.approx(2.0, abs=1e-8)


def test_constant_reaction_dirichlet():
    # -phi'' + c0 phi = lambda phi on [0,1], DD: lambda = pi^2 + c0
    c = co.build_reaction(3.0, 3.0, 0.05)
    lam = orc.shoot_principal(None, c, d=1, s=0.0, bc=("D", "D"))
    assert lam == pytest.approx(math.pi ** 2 + 3.0, rel=1e-8)


def test_core_interval_golden_values():
    c = co.build_reaction(1.0, 100.0, 0.05)
    lam_nn = orc.shoot_principal(None, c, bc=("N", "N"), domain=(1/3, 2/3))
    lam_dd = orc.shoot_principal(None, c, bc=("D", "D"), domain=(1/3, 2/3))
    assert lam_nn == pytest.approx(1.0, abs=1e-8)
    assert lam_dd == pytest.approx(1.0 + 9 * math.pi ** 2, rel=1e-8)


def test_radial_dimension_regular_at_origin():
    # d = 3, no drift, uniform c, DD on [0,1]: phi = sin(pi r)/r,
    # lambda = pi^2 + c0 (the regular spherical mode)
    c = co.build_reaction(1.5, 1.5, 0.05)
    lam = orc.shoot_principal(None, c, d=3, s=0.0, bc=("D", "D"))
    assert lam == pytest.approx(math.pi ** 2 + 1.5, rel=1e-6)


def test_invalid_bc():
    c = co.build_reaction(1.0, 100.0, 0.05)
    with pytest.raises(orc.OracleError):
        orc.shoot_principal(None, c, bc=("N", "Z"))


def test_crosscheck_oscillating_potentials(dd_potential, nn_potential,
                                           canonical_reaction):
    for name, pot in (("dd", dd_potential), ("nn", nn_potential)):
        rec = orc.crosscheck(name, pot, canonical_reaction, s=15.0, tol=1e-6)
        assert rec.ok, f"{name}: rel err {rec.rel_err}"


def test_crosscheck_record_shape(dd_potential, canonical_reaction):
    rec = orc.crosscheck("case", dd_potential, canonical_reaction, s=2.0)
    d = rec.as_dict()
    assert set(d) == {"case_id", "lambda_fem", "lambda_shoot", "rel_err",
                      "pass"}
    assert d["pass"] is rec.ok


def test_shoot_unaffected_by_reaction_offset():
    # the oracle reports on the unshifted scale, like the Galerkin solver
    base = co.build_reaction(1.0, 100.0, 0.05)
    lam = orc.shoot_principal(None, base, bc=("N", "N"), domain=(1/3, 2/3))
    assert lam == pytest.approx(1.0, abs=1e-8)


def test_large_drift_agreement(sharp_reaction):
    # drift rates where exp(2 s m) would overflow any direct quadrature
    sched = co.make_schedule("DD", 1/6, 0.25, 1/3, 4)
    m = co.build_sdd(sched)
    rec = orc.crosscheck("large-s", m, sharp_reaction, s=500.0,
                         target_elems=1200, tol=2e-5)
    assert rec.ok, f"rel err {rec.rel_err}"
