"""Principal eigenvalue solver for radial advection-diffusion operators.

The operator

    L phi = -phi'' - ((d-1)/r) phi' - 2 s m'(r) phi' + c(r) phi

is symmetrised by the weight w(r) = r^{d-1} exp(2 s m(r)):

    -(w phi')' + w c phi = lambda w phi.

A conforming P1 Galerkin discretisation of this form yields a symmetric
tridiagonal pencil (K, M). The principal eigenvalue is located by Sturm
inertia bisection and the eigenfunction by shifted inverse iteration,
both running through the kernels in :mod:`osceig._kernels`.

Exponential weight scaling: the assembled weight is exp(2 s m - L0) with
L0 = max 2 s m, so the matrices stay representable for any drift rate
the weight range allows; if the range 2 s (max m - min m) itself exceeds
the floating point budget, :class:`WeightOverflowError` is raised rather
than returning a silently wrong eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .mesh import Mesh, build_mesh

#: exp() argument budget for the scaled weight range (double precision
#: holds exp(+-709); keep a margin for quadrature sums).
WEIGHT_LOG_RANGE = 1400.0

BC_DIRICHLET = "D"
BC_NEUMANN = "N"


class EigensolverError(RuntimeError):
    """Solver failure (bracketing, convergence, or invalid input)."""


class WeightOverflowError(EigensolverError):
    """The drift weight spans more than the floating point budget."""


@dataclass(frozen=True)
class Pencil:
    """Diagonally normalised tridiagonal stiffness/mass pencil.

    The raw weighted pencil (K, M) is stored as (D K D, D M D) with
    D = diag(M)^{-1/2}, so ``m_diag`` is identically one and every entry
    is O(1/h^2) regardless of the weight's dynamic range; generalized
    eigenvalues are unchanged. ``log_mass`` holds log M_ii of the raw
    pencil per free node: nodal eigenfunction values are recovered as
    exp(-log_mass/2) times the normalised eigenvector, which also makes
    them weighted-L2 normalised against the true (unscaled) weight.
    """

    k_diag: np.ndarray
    k_off: np.ndarray
    m_diag: np.ndarray
    m_off: np.ndarray
    log_mass: np.ndarray
    mesh: Mesh
    bc: tuple
    c_min: float
    c_max: float

    @property
    def n(self) -> int:
        return self.k_diag.size


@dataclass(frozen=True)
class EigenResult:
    """Principal eigenpair with the reaction positivity shift removed."""

    eigenvalue: float
    phi: np.ndarray
    mesh: Mesh
    bc: tuple
    residual: float
    eigenvalue_shifted: float

    def phi_at(self, r: float) -> float:
        return float(np.interp(r, self.mesh.nodes, self.phi))


@dataclass(frozen=True)
class ReferenceEigenvalues:
    """The four core-interval reference eigenvalues (left BC, right BC)."""

    lambda_nn: float
    lambda_nd: float
    lambda_dn: float
    lambda_dd: float
    d: int
    mesh: Mesh
    reaction: object
    phi_nn: np.ndarray

    @property
    def rho(self) -> float:
        return self.lambda_dd - self.lambda_nn

    def as_dict(self) -> dict:
        return {
            "NN": self.lambda_nn,
            "ND": self.lambda_nd,
            "DN": self.lambda_dn,
            "DD": self.lambda_dd,
        }


def _validate_bc(bc):
    bc = tuple(bc)
    if len(bc) != 2 or any(b not in (BC_DIRICHLET, BC_NEUMANN) for b in bc):
        raise EigensolverError(f"boundary conditions must be D/N pairs, got {bc!r}")
    return bc


def assemble(mesh: Mesh, potential, reaction, d: int, s: float,
             bc=("N", "N")) -> Pencil:
    """Assemble the weighted P1 pencil on the given mesh.

    ``potential`` may be None (zero drift). ``reaction`` may be a
    Reaction object or any callable; its positivity shift, if present,
    is included here and removed again by :func:`solve_principal`.
    """
    bc = _validate_bc(bc)
    if d < 1:
        raise EigensolverError("dimension must be a positive integer")
    pts, wts = mesh.quadrature()
    if potential is not None and s != 0.0:
        two_sm = 2.0 * s * np.asarray(potential.value(pts), dtype=float)
    else:
        two_sm = np.zeros_like(pts)
    span = float(two_sm.max() - two_sm.min()) if two_sm.size else 0.0
    if span > WEIGHT_LOG_RANGE:
        raise WeightOverflowError(
            f"weight range 2s*(max m - min m) = {span:.1f} exceeds the "
            f"floating point budget {WEIGHT_LOG_RANGE:.0f}")
    log_w = two_sm
    if d > 1:
        log_w = log_w + (d - 1) * np.log(np.maximum(pts, 1e-300))
    cvals = np.asarray(reaction.value(pts), dtype=float) if reaction is not None \
        else np.zeros_like(pts)

    n_el = mesh.n_elements
    q = mesh.quadrature_order
    h = mesh.element_lengths
    pts_e = pts.reshape(n_el, q)
    log_w_e = log_w.reshape(n_el, q)
    c_e = cvals.reshape(n_el, q)
    # factored weight: per-element scale exp(L_e) times an O(1) local part
    l_e = log_w_e.max(axis=1)
    w_e = wts.reshape(n_el, q) * np.exp(log_w_e - l_e[:, None])
    # P1 hat functions on each element: left = 1 - t/h, right = t/h
    t = pts_e - mesh.nodes[:-1, None]
    phi_r = t / h[:, None]
    phi_l = 1.0 - phi_r

    int_w = w_e.sum(axis=1)                      # \int w (locally scaled)
    grad = int_w / h**2                          # \int w phi_i' phi_j' up to sign
    tiny = 1e-290
    m_ll = np.maximum((w_e * phi_l * phi_l).sum(axis=1), tiny)
    m_lr = (w_e * phi_l * phi_r).sum(axis=1)
    m_rr = np.maximum((w_e * phi_r * phi_r).sum(axis=1), tiny)
    k_ll = grad + (w_e * c_e * phi_l * phi_l).sum(axis=1)
    k_lr = -grad + (w_e * c_e * phi_l * phi_r).sum(axis=1)
    k_rr = grad + (w_e * c_e * phi_r * phi_r).sum(axis=1)

    # log of the raw mass diagonal, accumulated in log space
    n = mesh.nodes.size
    a = np.full(n, -np.inf)
    a[:-1] = l_e + np.log(m_ll)
    a[1:] = np.logaddexp(a[1:], l_e + np.log(m_rr))

    # diagonally normalised pencil: entry_ij / sqrt(M_ii M_jj); exponents
    # are O(log(1/h)) because adjacent raw entries share the weight scale
    kd = np.zeros(n)
    kd[:-1] += np.exp(l_e - a[:-1]) * k_ll
    kd[1:] += np.exp(l_e - a[1:]) * k_rr
    pair = 0.5 * (a[:-1] + a[1:])
    ko = np.exp(l_e - pair) * k_lr
    mo = np.exp(l_e - pair) * m_lr
    md = np.ones(n)
    if not (np.all(np.isfinite(kd)) and np.all(np.isfinite(ko))):
        raise EigensolverError("assembly produced non-finite scaled entries")

    lo = 0 if bc[0] == BC_NEUMANN else 1
    hi = n if bc[1] == BC_NEUMANN else n - 1
    if hi - lo < 2:
        raise EigensolverError("mesh too coarse for the requested conditions")
    return Pencil(kd[lo:hi], ko[lo:hi - 1], md[lo:hi], mo[lo:hi - 1],
                  a[lo:hi], mesh, bc, float(cvals.min()), float(cvals.max()))


def _count_below(p: Pencil, lam: float) -> int:
    return int(_kernels.sturm_count(p.k_diag, p.k_off, p.m_diag, p.m_off, lam))


def _bracket_principal(p: Pencil):
    """Find [lo, hi] with count(lo)=0 and count(hi)>=1."""
    lo = p.c_min - 1.0
    hi = p.c_max + 1.0
    step = max(1.0, 0.5 * (hi - lo))
    for _ in range(200):
        if _count_below(p, lo) == 0:
            break
        lo -= step
        step *= 2.0
    else:
        raise EigensolverError("failed to bracket the principal eigenvalue from below")
    step = max(1.0, 0.5 * (hi - lo))
    for _ in range(200):
        if _count_below(p, hi) >= 1:
            break
        hi += step
        step *= 2.0
    else:
        raise EigensolverError("failed to bracket the principal eigenvalue from above")
    return lo, hi


def principal_eigenpair(p: Pencil, tol: float = 1e-12,
                        max_bisect: int = 200) -> EigenResult:
    """Smallest pencil eigenvalue by Sturm bisection + inverse iteration.

    Operates on the diagonally normalised pencil from :func:`assemble`,
    so the Sturm pivots stay meaningful at any drift rate.
    """
    lo, hi = _bracket_principal(p)
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _count_below(p, mid) >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    lam = 0.5 * (lo + hi)

    # inverse iteration with a shift just below the eigenvalue
    shift = lo - max(tol, 1e-9 * max(1.0, abs(lam)))
    dm = p.k_diag - shift * p.m_diag
    off = p.k_off - shift * p.m_off
    rng = np.random.default_rng(20260823)
    v = rng.standard_normal(p.n)
    v /= np.linalg.norm(v)
    for _ in range(60):
        mv = p.m_diag * v
        mv[:-1] += p.m_off * v[1:]
        mv[1:] += p.m_off * v[:-1]
        v_new = _kernels.tridiag_solve(off, dm, off, mv)
        nrm = np.linalg.norm(v_new)
        if not np.isfinite(nrm) or nrm == 0.0:
            raise EigensolverError("inverse iteration diverged")
        v_new /= nrm
        if np.linalg.norm(v_new - v) < 1e-14 or np.linalg.norm(v_new + v) < 1e-14:
            v = v_new
            break
        v = v_new

    kv = p.k_diag * v
    kv[:-1] += p.k_off * v[1:]
    kv[1:] += p.k_off * v[:-1]
    mv = p.m_diag * v
    mv[:-1] += p.m_off * v[1:]
    mv[1:] += p.m_off * v[:-1]
    lam_rq = float(v @ kv) / float(v @ mv)
    residual = float(np.linalg.norm(kv - lam_rq * mv)
                     / max(np.linalg.norm(mv) * max(1.0, abs(lam_rq)), 1e-300))
    if abs(lam_rq - lam) > 1e-6 * max(1.0, abs(lam)):
        # bisection is authoritative; a drifting Rayleigh quotient means the
        # iteration latched onto a nearby mode
        raise EigensolverError(
            f"inverse iteration disagreed with bisection: {lam_rq} vs {lam}")

    # weighted-L2 normalisation against the true weight, positive sign
    scale = float(v @ mv)
    if scale <= 0.0 or not np.isfinite(scale):
        raise EigensolverError("mass normalisation failed")
    v = v / np.sqrt(scale)
    if np.sum(v) < 0.0:
        v = -v
    # nodal values phi_i = exp(-log_mass_i / 2) v_i; components at the
    # iteration noise floor are zeroed rather than amplified
    noise = 2.3e-14 * float(np.max(np.abs(v)))
    with np.errstate(divide="ignore"):
        log_phi = -0.5 * p.log_mass + np.log(np.abs(v))
    vals = np.where(np.abs(v) < noise, 0.0,
                    np.sign(v) * np.exp(np.clip(log_phi, -745.0, 709.0)))

    n = p.mesh.nodes.size
    phi = np.zeros(n)
    lo_i = 0 if p.bc[0] == BC_NEUMANN else 1
    phi[lo_i:lo_i + p.n] = vals
    return EigenResult(lam_rq, phi, p.mesh, p.bc, residual, lam_rq)


def solve_principal(potential, reaction, d: int = 1, s: float = 0.0,
                    bc=("N", "N"), mesh: Mesh | None = None,
                    domain=(0.0, 1.0), tol: float = 1e-12,
                    target_elems: int = 300) -> EigenResult:
    """Assemble and solve; reports the eigenvalue on the unshifted scale."""
    if mesh is None:
        mesh = build_mesh(potential, reaction, domain,
                          target_elems=target_elems, s=s)
    p = assemble(mesh, potential, reaction, d, s, bc)
    res = principal_eigenpair(p, tol=tol)
    offset = getattr(reaction, "offset", 0.0) if reaction is not None else 0.0
    if offset:
        res = EigenResult(res.eigenvalue - offset, res.phi, res.mesh, res.bc,
                          res.residual, res.eigenvalue)
    return res


def rayleigh_quotient(p: Pencil, phi_interior: np.ndarray) -> float:
    """phi^T K phi / phi^T M phi for nodal values on the pencil's free nodes.

    The vector is converted to the pencil's normalised coordinates
    (v_i = phi_i exp(log_mass_i / 2), up to a common shift that cancels
    in the quotient).
    """
    phi = np.asarray(phi_interior, dtype=float)
    if phi.size != p.n:
        raise EigensolverError("test vector size does not match the pencil")
    support = np.abs(phi) > 0.0
    if not np.any(support):
        raise EigensolverError("test vector has no mass")
    a_ref = float(np.max(p.log_mass[support]))
    v = phi * np.exp(0.5 * (p.log_mass - a_ref))
    kv = p.k_diag * v
    kv[:-1] += p.k_off * v[1:]
    kv[1:] += p.k_off * v[:-1]
    mv = p.m_diag * v
    mv[:-1] += p.m_off * v[1:]
    mv[1:] += p.m_off * v[:-1]
    den = float(v @ mv)
    if den <= 0.0:
        raise EigensolverError("test vector has no mass")
    return float(v @ kv) / den


def reference_eigenvalues(reaction, d: int = 1, mesh: Mesh | None = None,
                          target_elems: int = 1200) -> ReferenceEigenvalues:
    """Four drift-free principal eigenvalues on the core interval [1/3, 2/3]."""
    if mesh is None:
        mesh = build_mesh(None, reaction, (1.0 / 3.0, 2.0 / 3.0),
                          target_elems=target_elems)
    vals = {}
    phi_nn = None
    for bcl in ("N", "D"):
        for bcr in ("N", "D"):
            res = solve_principal(None, reaction, d=d, s=0.0, bc=(bcl, bcr),
                                  mesh=mesh)
            vals[bcl + bcr] = res.eigenvalue
            if (bcl, bcr) == ("N", "N"):
                phi_nn = res.phi
    if not (vals["NN"] <= min(vals["ND"], vals["DN"])
            and max(vals["ND"], vals["DN"]) <= vals["DD"]):
        raise EigensolverError("reference eigenvalue ordering violated")
    return ReferenceEigenvalues(vals["NN"], vals["ND"], vals["DN"], vals["DD"],
                                d, mesh, reaction, phi_nn)


@dataclass(frozen=True)
class SweepPoint:
    s: float
    eigenvalue: float
    residual: float
    phi_at_one_third: float
    overflow: bool


def eigenvalue_sweep(potential, reaction, s_values, d: int = 1,
                     bc=("N", "N"), mesh: Mesh | None = None,
                     target_elems: int = 600, tol: float = 1e-12):
    """Principal eigenvalue across drift rates; overflow points are flagged."""
    s_values = np.asarray(s_values, dtype=float)
    if mesh is None:
        s_cap = float(np.max(s_values)) if s_values.size else 0.0
        # grade for the largest representable s in the grid
        if potential is not None and s_cap > 0.0:
            span = 2.0 * s_cap * (np.max(np.abs(potential.value(
                np.linspace(0.0, 1.0, 4097)))))
            if 2.0 * span > WEIGHT_LOG_RANGE:
                s_cap = s_cap * WEIGHT_LOG_RANGE / (2.0 * span)
        mesh = build_mesh(potential, reaction, (0.0, 1.0),
                          target_elems=target_elems, s=s_cap)
    out = []
    for s in s_values:
        try:
            res = solve_principal(potential, reaction, d=d, s=float(s), bc=bc,
                                  mesh=mesh, tol=tol)
        except WeightOverflowError:
            out.append(SweepPoint(float(s), float("nan"), float("nan"),
                                  float("nan"), True))
            continue
        out.append(SweepPoint(float(s), res.eigenvalue, res.residual,
                              res.phi_at(1.0 / 3.0), False))
    return out
