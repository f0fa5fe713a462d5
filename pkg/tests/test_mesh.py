"""Graded meshes: breakpoint alignment, weight grading, quadrature."""

import numpy as np
import pytest

from osceig import coefficients as co
from osceig.mesh import Mesh, MeshError, build_mesh, mesh_from_json, refine


def test_mesh_validation():
    with pytest.raises(MeshError):
        Mesh(np.array([0.0]))
    with pytest.raises(MeshError):
        Mesh(np.array([0.0, 0.5, 0.4]))


def test_breakpoints_are_nodes(dd_potential, canonical_reaction):
    mesh = build_mesh(dd_potential, canonical_reaction)
    bp = dd_potential.breakpoints()
    bp = bp[(bp > 0.0) & (bp < 1.0)]
    for b in bp:
        assert np.min(np.abs(mesh.nodes - b)) < 1e-12


def test_min_elements_per_gap(dd_potential, canonical_reaction):
    mesh = build_mesh(dd_potential, canonical_reaction, target_elems=10,
                      min_elems_per_interval=4)
    bp = np.sort(np.unique(np.concatenate(
        [dd_potential.breakpoints(), canonical_reaction.breakpoints(),
         [0.0, 1.0]])))
    bp = bp[(bp >= 0.0) & (bp <= 1.0)]
    for a, b in zip(bp[:-1], bp[1:]):
        if b - a < 1e-9:   # near-duplicate breakpoints are merged by the mesh
            continue
        inside = np.sum((mesh.nodes >= a - 1e-14) & (mesh.nodes <= b + 1e-14))
        assert inside >= 5  # 4 elements -> 5 nodes


def test_weight_grading_refines_for_large_s(dd_potential, canonical_reaction):
    coarse = build_mesh(dd_potential, canonical_reaction, s=0.0)
    fine = build_mesh(dd_potential, canonical_reaction, s=500.0)
    assert fine.n_elements > 2 * coarse.n_elements
    # per-element weight-exponent variation stays near the cap (the grading
    # estimates each gap's oscillation from a coarse sample, so allow slack)
    s, cap = 500.0, 0.35
    worst = 0.0
    for a, b in zip(fine.nodes[:-1], fine.nodes[1:]):
        vals = dd_potential.value(np.linspace(a, b, 9))
        worst = max(worst, 2.0 * s * (vals.max() - vals.min()))
    assert worst <= 4.0 * cap


def test_refine_nests_nodes(dd_potential, canonical_reaction):
    mesh = build_mesh(dd_potential, canonical_reaction, target_elems=50)
    fine = refine(mesh, 2)
    assert fine.n_elements == 2 * mesh.n_elements
    for node in mesh.nodes:
        assert np.min(np.abs(fine.nodes - node)) < 1e-15
    with pytest.raises(MeshError):
        refine(mesh, 1)


def test_quadrature_integrates_polynomials_exactly():
    mesh = Mesh(np.array([0.0, 0.3, 0.55, 1.0]), quadrature_order=6)
    pts, wts = mesh.quadrature()
    for k in range(0, 12):  # order-6 Gauss is exact through degree 11
        approx = float(np.sum(wts * pts ** k))
        assert approx == pytest.approx(1.0 / (k + 1), rel=1e-13)


def test_mesh_json_round_trip():
    mesh = Mesh(np.linspace(0.0, 1.0, 17), quadrature_order=4)
    back = mesh_from_json(mesh.to_json())
    assert np.array_equal(back.nodes, mesh.nodes)
    assert back.quadrature_order == 4
