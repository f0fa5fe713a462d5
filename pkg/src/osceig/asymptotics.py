"""Explicit asymptotic machinery for the large-drift eigenvalue limits.

Everything here is closed-form bookkeeping around the ladder coefficients

    sigma_n(s) = alpha^n exp(3 (1/6)^n s),
    l_n(s)     = 1 / prod_{k>=n} (1 + sigma_k(s)),

the explicit Neumann trial function whose plateau heights are l_n(s),
the s-independent Dirichlet trial bound, the E/F/G functionals that
control the Neumann bound's boundary contribution, and a trend analyser
that estimates liminf/limsup of an eigenvalue sweep. All exponential
sums run in log space; nothing here can overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import CORE_LEFT, CORE_RIGHT, FAMILY_NN


class AsymptoticsError(ValueError):
    """Invalid ladder/trend parameters."""


@dataclass(frozen=True)
class LadderCoefficients:
    """sigma_n and l_n for n = 1..n_eff, plus certified truncation data.

    ``log_sigma[i]`` is log sigma_{i+1}; ``log_ell[i]`` is log l_{i+1}.
    The infinite product over k > n_eff is bounded by ``tail_bound`` and
    folded into every l_n.
    """

    alpha: float
    s: float
    tail_tol: float
    log_sigma: np.ndarray
    log_ell: np.ndarray
    tail_bound: float

    @property
    def n_eff(self) -> int:
        return self.log_sigma.size

    def sigma(self, n) -> np.ndarray:
        """sigma_n for 1-based n (vectorised)."""
        idx = np.asarray(n) - 1
        return np.exp(self.log_sigma[idx])

    def ell(self, n) -> np.ndarray:
        """l_n for 1-based n; n past the stored range evaluates to ~1."""
        n = np.asarray(n)
        idx = np.minimum(n, self.n_eff) - 1
        out = np.exp(self.log_ell[idx])
        return np.where(n > self.n_eff, np.exp(-self.tail_bound), out)


def ladder(alpha: float, s: float, tail_tol: float = 1e-14,
           n_min: int = 25) -> LadderCoefficients:
    """Ladder coefficients with the product truncated at certified error.

    Truncation point: the first n_eff >= n_min where sigma decays
    geometrically (exponent term below ln(1/alpha)/2) and the geometric
    tail sum of sigma is below tail_tol/2; then
    |log l_n - log l_n^trunc| <= tail sum for every n.
    """
    if not 0.0 < alpha < 1.0:
        raise AsymptoticsError("alpha must lie in (0, 1)")
    if s < 0.0 or tail_tol <= 0.0:
        raise AsymptoticsError("s >= 0 and tail_tol > 0 required")
    log_alpha = math.log(alpha)
    logs = []
    n = 1
    while True:
        log_sig = n * log_alpha + 3.0 * (1.0 / 6.0) ** n * s
        logs.append(log_sig)
        # past the active window sigma_k <= sigma_n * alpha^(k-n) * r with
        # r = exp(3 (1/6)^n s) -> 1, so the tail is geometric in alpha
        decayed = 3.0 * (1.0 / 6.0) ** n * s < 0.5 * (-log_alpha)
        if n >= n_min and decayed:
            # sigma_{n+k} <= sigma_n * alpha^{k/2} once the exponential part
            # is below sqrt(1/alpha) per step
            ra = math.sqrt(alpha)
            tail = math.exp(log_sig) * ra / (1.0 - ra)
            if tail < 0.5 * tail_tol:
                break
        if n > 10_000:
            raise AsymptoticsError("ladder truncation did not converge")
        n += 1
    log_sigma = np.array(logs)
    log1p_sigma = np.logaddexp(0.0, log_sigma)
    # log l_n = -sum_{k>=n} log(1+sigma_k); suffix sums, tail folded in
    suffix = np.cumsum(log1p_sigma[::-1])[::-1]
    log_ell = -(suffix + tail)
    return LadderCoefficients(alpha, s, tail_tol, log_sigma, log_ell, tail)


@dataclass(frozen=True)
class WindowReport:
    k1: int
    k2: int
    eps: float
    monotone: bool


def window_indices(lad: LadderCoefficients, eps: float) -> WindowReport:
    """Largest indices with sigma_n above 1/eps (K1) and above eps (K2).

    Computed by scanning the stored ladder; sigma need not be monotone
    in n, so the report also flags whether it was.
    """
    if not 0.0 < eps < 1.0:
        raise AsymptoticsError("eps must lie in (0, 1)")
    log_eps = math.log(eps)
    above_inv = np.nonzero(lad.log_sigma > -log_eps)[0]
    above_eps = np.nonzero(lad.log_sigma > log_eps)[0]
    k1 = int(above_inv[-1]) + 1 if above_inv.size else 0
    k2 = int(above_eps[-1]) + 1 if above_eps.size else 0
    monotone = bool(np.all(np.diff(lad.log_sigma) <= 1e-12))
    return WindowReport(k1, max(k2, k1), eps, monotone)


def _logsumexp(terms: np.ndarray) -> float:
    if terms.size == 0:
        return -math.inf
    hi = float(np.max(terms))
    if hi == -math.inf:
        return -math.inf
    return hi + math.log(float(np.sum(np.exp(terms - hi))))


def efg(alpha: float, s: float, lad: LadderCoefficients | None = None):
    """The three boundary-contribution functionals (E, F, G) at drift s.

    E = e^{s/2} l_1^2;  F = sum alpha^n e^{2(1/6)^n s} l_n^2;
    G = sum alpha^n e^{-4(1/6)^n s} l_{n+1}^2. Summed in log space over
    the ladder's certified range; the discarded tails are geometric and
    below the ladder's truncation tolerance.
    """
    if lad is None:
        lad = ladder(alpha, s)
    n = np.arange(1, lad.n_eff + 1)
    pow6 = (1.0 / 6.0) ** n
    log_e = 0.5 * s + 2.0 * float(lad.log_ell[0])
    log_f = _logsumexp(n * math.log(alpha) + 2.0 * pow6 * s
                       + 2.0 * lad.log_ell[n - 1])
    ell_next = np.where(n < lad.n_eff, lad.log_ell[np.minimum(n, lad.n_eff - 1)],
                        -lad.tail_bound)
    log_g = _logsumexp(n * math.log(alpha) - 4.0 * pow6 * s + 2.0 * ell_next)
    return math.exp(log_e), math.exp(log_f), math.exp(log_g)


def _gauss_integral(f, a, b, n_sub=64, order=6):
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_sub + 1)
    h = np.diff(edges)[:, None]
    pts = edges[:-1, None] + 0.5 * h * (xg[None, :] + 1.0)
    wts = 0.5 * h * wg[None, :]
    return float(np.sum(wts * f(pts)))


def _boundary_integral(phi_vals_fn, phi_slope_fn, potential, reaction, d, s,
                       knots):
    """I[phi] = int r^{d-1} e^{2sm} (phi'^2 + c phi^2) over the knot spans."""
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        if b - a <= 1e-15:
            continue

        def integrand(r):
            w = np.exp(2.0 * s * potential.value(r))
            if d > 1:
                w = w * np.maximum(r, 1e-300) ** (d - 1)
            return w * (phi_slope_fn(r) ** 2
                        + reaction.value(r) * phi_vals_fn(r) ** 2)

        total += _gauss_integral(integrand, a, b, n_sub=16)
    return total


@dataclass(frozen=True)
class NeumannBoundReport:
    bound: float
    lambda_nn: float
    boundary_terms: float
    denominator: float
    delta1: float


def neumann_test_upper_bound(potential, reaction, refvals, d: int, s: float,
                             delta1: float | None = None,
                             lad: LadderCoefficients | None = None
                             ) -> NeumannBoundReport:
    """Upper bound on lambda(s) from the explicit plateau trial function.

    The trial function ramps from 0 up to l_1(s) just left of delta,
    holds the plateau l_n(s) on [Y_{n-1}, X_n], interpolates linearly to
    l_{n+1}(s) across each dip [X_n, Y_n] (slope scaled by the actual
    interval length), continues with the drift-free principal
    eigenfunction through the core, and mirrors on the right. Past the
    truncation depth it ramps linearly from l_{N+1} to 1 at 1/3. Being a
    genuine trial function, the value dominates the solver's lambda(s).
    """
    if potential.family != FAMILY_NN:
        raise AsymptoticsError("the plateau bound applies to the NN family")
    sched = potential.schedule
    alpha = sched.alpha
    if lad is None:
        lad = ladder(alpha, s)
    delta = sched.delta
    if delta1 is None:
        delta1 = 0.5 * delta
    if not 0.0 < delta1 <= delta:
        raise AsymptoticsError("delta1 must lie in (0, delta]")
    probe = np.linspace(delta - delta1, delta, 257)
    if float(np.max(potential.value(probe))) > 0.25 + 1e-12:
        raise AsymptoticsError("delta1 violates m <= 1/4 left of delta")

    depth = sched.depth
    phi_nn = refvals.phi_nn
    phi_l = float(phi_nn[0])
    # piecewise-linear trial function on [0, 1/3]: (knot, value) pairs
    knots = [0.0, delta - delta1, delta]
    vals = [0.0, 0.0, float(lad.ell(1))]
    for n in range(1, depth + 1):
        knots.extend([sched.x[n], sched.y[n]])
        vals.extend([float(lad.ell(n)), float(lad.ell(n + 1))])
    knots.append(CORE_LEFT)
    vals.append(1.0)
    knots = np.asarray(knots)
    vals = np.asarray(vals) * phi_l

    def phi_left(r):
        return np.interp(r, knots, vals)

    slopes = np.diff(vals) / np.maximum(np.diff(knots), 1e-300)

    def slope_left(r):
        idx = np.clip(np.searchsorted(knots, r, side="right") - 1, 0,
                      slopes.size - 1)
        return slopes[idx]

    i_left = _boundary_integral(phi_left, slope_left, potential, reaction,
                                d, s, knots)
    scale = float(phi_nn[-1]) / phi_l  # = phi^NN(2/3)/phi^NN(1/3)

    def phi_right(r):
        return scale * phi_left(1.0 - np.asarray(r))

    def slope_right(r):
        return -scale * slope_left(1.0 - np.asarray(r))

    i_right = _boundary_integral(phi_right, slope_right, potential, reaction,
                                 d, s, 1.0 - knots[::-1])

    # denominator: int_core r^{d-1} phi_NN^2 (drift vanishes on the core)
    nodes = refvals.mesh.nodes

    def phi_core(r):
        return np.interp(r, nodes, phi_nn)

    def integrand(r):
        w = np.maximum(r, 1e-300) ** (d - 1) if d > 1 else np.ones_like(r)
        return w * phi_core(r) ** 2

    denom = _gauss_integral(integrand, CORE_LEFT, CORE_RIGHT, n_sub=128)
    bound = refvals.lambda_nn + (i_left + i_right) / denom
    return NeumannBoundReport(bound, refvals.lambda_nn, i_left + i_right,
                              denom, delta1)


@dataclass(frozen=True)
class DirichletBoundReport:
    bound: float
    numeric_quotient: float


def dirichlet_test_upper_bound(refvals, potential=None, reaction=None,
                               s: float = 0.0) -> DirichletBoundReport:
    """The s-independent bound lambda^DD from the zero-extended trial.

    The core Dirichlet eigenfunction extended by zero is an admissible
    trial function for any drift vanishing on the core, so lambda^DD
    bounds lambda(s) for every s. The report also evaluates the extended
    function's Rayleigh quotient numerically as a self-check.
    """
    from . import eigensolver

    mesh = refvals.mesh
    res = eigensolver.solve_principal(None, refvals.reaction, d=refvals.d,
                                      s=0.0, bc=("D", "D"), mesh=mesh)
    p = eigensolver.assemble(mesh, None, refvals.reaction, refvals.d, 0.0,
                             bc=("D", "D"))
    quotient = eigensolver.rayleigh_quotient(p, res.phi[1:-1])
    offset = getattr(refvals.reaction, "offset", 0.0)
    return DirichletBoundReport(refvals.lambda_dd, quotient - offset)


@dataclass(frozen=True)
class TrendReport:
    s_grid: np.ndarray
    lambda_values: np.ndarray
    liminf_estimate: float
    limsup_estimate: float
    oscillation_amplitude: float
    converged: bool
    tail_fraction: float

    def as_dict(self) -> dict:
        return {
            "s_grid": self.s_grid.tolist(),
            "lambda_values": self.lambda_values.tolist(),
            "liminf_estimate": self.liminf_estimate,
            "limsup_estimate": self.limsup_estimate,
            "oscillation_amplitude": self.oscillation_amplitude,
            "converged": self.converged,
            "tail_fraction": self.tail_fraction,
        }


def trend(s_grid, lambda_values, tail_fraction: float = 0.25,
          tol: float = 1e-2) -> TrendReport:
    """Estimate liminf/limsup over the trailing fraction of a sweep."""
    s_grid = np.asarray(s_grid, dtype=float)
    lam = np.asarray(lambda_values, dtype=float)
    if s_grid.size < 8:
        raise AsymptoticsError("trend needs at least 8 samples")
    if np.any(np.diff(s_grid) <= 0):
        raise AsymptoticsError("s grid must be increasing")
    if not 0.0 < tail_fraction <= 1.0:
        raise AsymptoticsError("tail_fraction must lie in (0, 1]")
    n_tail = max(2, int(math.ceil(tail_fraction * s_grid.size)))
    tail = lam[-n_tail:]
    tail = tail[np.isfinite(tail)]
    if tail.size < 2:
        raise AsymptoticsError("tail window has fewer than 2 finite samples")
    lo, hi = float(np.min(tail)), float(np.max(tail))
    amp = hi - lo
    return TrendReport(s_grid, lam, lo, hi, amp, amp < tol, tail_fraction)
