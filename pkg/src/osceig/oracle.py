"""Independent principal-eigenvalue oracle by Pruefer-angle shooting.

Shares no assembly code with the Galerkin path: the second-order equation

    -phi'' - ((d-1)/r) phi' - 2 s m'(r) phi' + c(r) phi = lambda phi

is rewritten in Pruefer variables phi = rho sin(theta), phi' = rho
cos(theta), giving the scalar angle equation

    theta' = cos^2(theta) + A(r) sin(theta)cos(theta)
             + (lambda - c(r)) sin^2(theta),
    A(r) = (d-1)/r + 2 s m'(r).

Only s*m' enters, never exp(2sm), so the oracle remains valid at drift
rates where the weighted assembly would overflow. The principal
eigenvalue is the unique lambda at which the angle shot from the left
boundary condition first reaches the right target; the angle at the
right endpoint is monotone increasing in lambda, so bisection applies.

Coefficients reach the integrator as piecewise polynomials: exact
segment polynomials when the input exposes them, otherwise an adaptive
least-squares fit with certified sampling error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

_THETA = {"D": 0.0, "N": math.pi / 2.0}
_THETA_RIGHT = {"D": math.pi, "N": math.pi / 2.0}


class OracleError(RuntimeError):
    """Shooting failure: bracketing, fitting, or invalid input."""


@dataclass(frozen=True)
class ShootingConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    fit_tol: float = 1e-11
    max_bisect: int = 200
    lambda_tol: float = 1e-10
    r_start: float = 1e-6  # start radius for d > 1 (regular solution)
    max_fit_depth: int = 24


def _fit_segment(func, a, b, tol, depth, max_depth, out_edges, out_coeffs):
    """Append a certified polynomial approximation of func on [a, b]."""
    xs = np.linspace(a, b, 33)
    ys = np.asarray(func(xs), dtype=float)
    for deg in (3, 5, 8):
        t = xs - a
        coeffs = np.polyfit(t, ys, deg)
        err = float(np.max(np.abs(np.polyval(coeffs, t) - ys)))
        scale = max(1.0, float(np.max(np.abs(ys))))
        if err <= tol * scale:
            out_edges.append(b)
            out_coeffs.append(coeffs)
            return
    if depth >= max_depth:
        raise OracleError(f"coefficient fit failed on [{a}, {b}]")
    mid = 0.5 * (a + b)
    _fit_segment(func, a, mid, tol, depth + 1, max_depth, out_edges, out_coeffs)
    _fit_segment(func, mid, b, tol, depth + 1, max_depth, out_edges, out_coeffs)


def _piecewise_fit(func, breakpoints, domain, tol, max_depth):
    """Piecewise polynomials of func between its breakpoints on the domain."""
    lo, hi = domain
    bp = np.asarray(breakpoints, dtype=float)
    bp = bp[(bp > lo + 1e-14) & (bp < hi - 1e-14)]
    knots = np.unique(np.concatenate([[lo], bp, [hi]]))
    edges = [knots[0]]
    coeffs = []
    for a, b in zip(knots[:-1], knots[1:]):
        _fit_segment(func, a, b, tol, 0, max_depth, edges, coeffs)
    width = max(c.size for c in coeffs)
    table = np.zeros((len(coeffs), width))
    for i, c in enumerate(coeffs):
        table[i, width - c.size:] = c
    return np.asarray(edges), table


def _merge_tables(edges_a, table_a, edges_b, table_b):
    """Re-express two piecewise tables on their common refinement."""
    edges = np.unique(np.concatenate([edges_a, edges_b]))

    def rebase(src_edges, src_table):
        width = src_table.shape[1]
        out = np.zeros((edges.size - 1, width))
        for i, a in enumerate(edges[:-1]):
            j = int(np.searchsorted(src_edges, a, side="right") - 1)
            j = min(max(j, 0), src_table.shape[0] - 1)
            # shift the local variable: p(t + dt) expressed in powers of t
            dt = a - src_edges[j]
            row = src_table[j]
            if dt == 0.0:
                out[i] = row
            else:
                poly = np.polynomial.Polynomial(row[::-1])
                shifted = poly(np.polynomial.Polynomial([dt, 1.0]))
                cs = shifted.coef[::-1]
                out[i, width - cs.size:] = cs
        return out

    return edges, rebase(edges_a, table_a), rebase(edges_b, table_b)


def _coefficient_tables(potential, reaction, domain, config):
    lo, hi = domain
    if potential is not None:
        mp = potential.derivative
        bp_m = potential.breakpoints()
    else:
        mp = lambda r: np.zeros_like(np.asarray(r, dtype=float))
        bp_m = np.array([])
    if reaction is not None:
        cv = reaction.value
        bp_c = reaction.breakpoints()
    else:
        cv = lambda r: np.zeros_like(np.asarray(r, dtype=float))
        bp_c = np.array([])
    edges_m, table_m = _piecewise_fit(mp, bp_m, domain, config.fit_tol,
                                      config.max_fit_depth)
    edges_c, table_c = _piecewise_fit(cv, bp_c, domain, config.fit_tol,
                                      config.max_fit_depth)
    return _merge_tables(edges_m, table_m, edges_c, table_c)


def shoot_principal(potential, reaction, d: int = 1, s: float = 0.0,
                    bc=("N", "N"), domain=(0.0, 1.0),
                    config: ShootingConfig | None = None) -> float:
    """Principal eigenvalue by angle bisection; reports the unshifted value."""
    if config is None:
        config = ShootingConfig()
    bc = tuple(bc)
    if bc[0] not in _THETA or bc[1] not in _THETA_RIGHT:
        raise OracleError(f"boundary conditions must be D/N pairs, got {bc!r}")
    edges, mp_tab, c_tab = _coefficient_tables(potential, reaction, domain,
                                               config)
    theta0 = _THETA[bc[0]]
    theta_target = _THETA_RIGHT[bc[1]]
    r_start = float(domain[0])
    if d > 1 and r_start <= 0.0:
        r_start = config.r_start
        theta0 = _THETA["N"]  # regular solution: phi' -> 0 at the origin

    def angle(lam):
        return float(_kernels.prufer_theta(
            edges, mp_tab, c_tab, float(d), float(s), float(lam), theta0,
            config.rtol, config.atol, r_start, config.r_start))

    if reaction is not None:
        pts = np.linspace(domain[0], domain[1], 513)
        cvals = np.asarray(reaction.value(pts), dtype=float)
        lo = float(cvals.min()) - 1.0
        hi = float(cvals.max()) + 1.0
    else:
        lo, hi = -1.0, 1.0
    # the accumulated angle increases with lambda; expand until it straddles
    step = max(1.0, 0.5 * (hi - lo))
    for _ in range(200):
        if angle(lo) < theta_target:
            break
        lo -= step
        step *= 2.0
    else:
        raise OracleError("no sign change: lower bracket expansion failed")
    step = max(1.0, 0.5 * (hi - lo))
    for _ in range(200):
        if angle(hi) > theta_target:
            break
        hi += step
        step *= 2.0
    else:
        raise OracleError("no sign change: upper bracket expansion failed")

    for _ in range(config.max_bisect):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if angle(mid) > theta_target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= config.lambda_tol * max(1.0, abs(mid)):
            break
    lam = 0.5 * (lo + hi)
    offset = getattr(reaction, "offset", 0.0) if reaction is not None else 0.0
    return lam - offset


@dataclass(frozen=True)
class CrosscheckRecord:
    case_id: str
    lambda_fem: float
    lambda_shoot: float
    rel_err: float
    ok: bool

    def as_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "lambda_fem": self.lambda_fem,
            "lambda_shoot": self.lambda_shoot,
            "rel_err": self.rel_err,
            "pass": self.ok,
        }


def crosscheck(case_id: str, potential, reaction, d: int = 1, s: float = 0.0,
               bc=("N", "N"), domain=(0.0, 1.0), mesh=None,
               tol: float = 1e-6, target_elems: int = 1200,
               richardson: bool = True,
               config: ShootingConfig | None = None) -> CrosscheckRecord:
    """Compare the Galerkin and shooting eigenvalues on one case.

    With ``richardson`` the Galerkin value is h^2-extrapolated from the
    mesh and its uniform refinement, removing the leading discretisation
    error so the comparison tests the solvers rather than the mesh.
    """
    from . import eigensolver
    from .mesh import build_mesh, refine

    if mesh is None:
        mesh = build_mesh(potential, reaction, domain,
                          target_elems=target_elems, s=s)
    fem = eigensolver.solve_principal(potential, reaction, d=d, s=s, bc=bc,
                                      mesh=mesh)
    lam_fem = fem.eigenvalue
    if richardson:
        fine = eigensolver.solve_principal(potential, reaction, d=d, s=s,
                                           bc=bc, mesh=refine(mesh, 2))
        lam_fem = (4.0 * fine.eigenvalue - lam_fem) / 3.0
    shot = shoot_principal(potential, reaction, d=d, s=s, bc=bc,
                           domain=domain, config=config)
    rel = abs(lam_fem - shot) / max(abs(shot), 1e-300)
    return CrosscheckRecord(case_id, lam_fem, shot, rel, rel <= tol)
