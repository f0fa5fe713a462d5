"""One-dimensional graded meshes aligned with coefficient breakpoints.

The oscillation ladder accumulates geometrically at 1/3 (and, mirrored,
at 2/3), so any mesh that resolves it must place nodes on every ladder
breakpoint and then subdivide each gap. With a per-interval element
minimum plus a global uniform target, the resulting mesh is uniform when
the coefficients are smooth and geometrically graded near the
accumulation points otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TOL = 1e-12


class MeshError(ValueError):
    """Invalid mesh construction parameters."""


@dataclass(frozen=True)
class Mesh:
    """Sorted node array on a closed interval."""

    nodes: np.ndarray
    quadrature_order: int = 6

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise MeshError("mesh needs at least two nodes")
        if np.any(np.diff(nodes) <= 0):
            raise MeshError("mesh nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def domain(self) -> tuple:
        return float(self.nodes[0]), float(self.nodes[-1])

    @property
    def n_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def element_lengths(self) -> np.ndarray:
        return np.diff(self.nodes)

    def quadrature(self):
        """Gauss-Legendre points/weights on every element, flattened."""
        xg, wg = np.polynomial.legendre.leggauss(self.quadrature_order)
        a = self.nodes[:-1, None]
        h = self.element_lengths[:, None]
        pts = a + 0.5 * h * (xg[None, :] + 1.0)
        wts = 0.5 * h * wg[None, :]
        return pts.ravel(), wts.ravel()

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes.tolist(),
            "quadrature_order": self.quadrature_order,
        }


def mesh_from_json(data: dict) -> Mesh:
    return Mesh(np.asarray(data["nodes"], dtype=float),
                int(data.get("quadrature_order", 6)))


def _collect_breakpoints(objs, domain):
    lo, hi = domain
    pts = [np.array([lo, hi])]
    for obj in objs:
        if obj is None:
            continue
        bp = np.asarray(obj.breakpoints(), dtype=float)
        pts.append(bp[(bp > lo + _TOL) & (bp < hi - _TOL)])
    merged = np.unique(np.concatenate(pts))
    # drop near-duplicates that survive unique() through rounding noise
    keep = np.concatenate([[True], np.diff(merged) > _TOL])
    return merged[keep]


def build_mesh(potential, reaction, domain=(0.0, 1.0), *,
               target_elems: int = 300, min_elems_per_interval: int = 8,
               extra_breakpoints=(), quadrature_order: int = 6,
               s: float = 0.0, weight_log_cap: float = 0.35) -> Mesh:
    """Mesh the domain with nodes on every coefficient breakpoint.

    Each gap between consecutive breakpoints receives at least
    ``min_elems_per_interval`` elements and at least its proportional
    share of ``target_elems`` uniform elements. Either argument may be
    None when that coefficient is absent.

    When the drift rate ``s`` is given, gaps are additionally subdivided
    so the weight exponent 2 s m varies by at most ``weight_log_cap``
    per element; this keeps the P1 discretisation in its h^2 regime
    through the exponential boundary layers at large s.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not hi > lo:
        raise MeshError("domain must have positive length")
    if target_elems < 1 or min_elems_per_interval < 1:
        raise MeshError("element counts must be positive")
    objs = [potential, reaction]
    if extra_breakpoints is not None and len(extra_breakpoints):
        class _Extra:
            def breakpoints(self):
                return np.asarray(extra_breakpoints, dtype=float)
        objs.append(_Extra())
    base = _collect_breakpoints(objs, (lo, hi))
    h_uniform = (hi - lo) / target_elems
    grade = s != 0.0 and potential is not None and weight_log_cap > 0.0
    pieces = []
    for a, b in zip(base[:-1], base[1:]):
        n_sub = max(int(np.ceil((b - a) / h_uniform)), min_elems_per_interval)
        if grade:
            samples = np.asarray(
                potential.value(np.linspace(a, b, 17)), dtype=float)
            osc = 2.0 * abs(s) * float(samples.max() - samples.min())
            n_sub = max(n_sub, int(np.ceil(osc / weight_log_cap)))
        pieces.append(np.linspace(a, b, n_sub + 1)[:-1])
    nodes = np.concatenate(pieces + [[hi]])
    return Mesh(nodes, quadrature_order)


def refine(mesh: Mesh, factor: int = 2) -> Mesh:
    """Split every element into ``factor`` equal parts, keeping all nodes."""
    if factor < 2:
        raise MeshError("refinement factor must be at least 2")
    a = mesh.nodes[:-1]
    h = mesh.element_lengths
    steps = np.arange(factor) / factor
    fine = (a[:, None] + h[:, None] * steps[None, :]).ravel()
    nodes = np.concatenate([fine, [mesh.nodes[-1]]])
    return Mesh(nodes, mesh.quadrature_order)
