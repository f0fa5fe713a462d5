"""Alternating tail-fold construction of a non-converging drift potential.

Starting from a DD-family representative, the loop alternates two moves:

1. scan a geometric grid of drift rates for the first s_n past the step
   threshold 8/ln(1 + rho/((n+1) c^*)) at which lambda(s_n, m_n) lands
   within the step's shrinking gap rho/(n+1) of the current family's
   reference eigenvalue;
2. fold the tail: flip the sign of m_n beyond the first zero-contact
   midpoint kappa past which |m_n| stays below tau_n = 1/s_n^2. The fold
   switches family membership while moving lambda(s_n, .) by at most the
   continuity budget c^*(e^{8/s_n} - 1), since the fold changes the
   potential by at most 2 tau_n in sup norm.

The finite-depth output oscillates between the two reference eigenvalues
at the recorded switch points; a truncation certificate bounds how far
any deeper build of the same ladder could move the eigenvalue at the
drift rates visited.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import coefficients as co
from . import eigensolver as es


class ConstructionError(RuntimeError):
    """A construction step failed; carries any partial trace built so far."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


def rho(refvals: es.ReferenceEigenvalues) -> float:
    """Spectral gap between the two reference eigenvalues; must be > 0."""
    gap = float(refvals.rho)
    if not gap > 0.0:
        raise ConstructionError(
            f"degenerate configuration: reference gap {gap} is not positive")
    return gap


def threshold_s(n: int, rho_value: float, c_star_upper: float) -> float:
    """Minimum drift rate for step n: 8 / ln(1 + rho / ((n+1) c^*))."""
    if n < 1:
        raise ConstructionError("step index starts at 1")
    if rho_value <= 0.0 or c_star_upper <= 0.0:
        raise ConstructionError("threshold needs positive gap and c^*")
    return 8.0 / math.log1p(rho_value / ((n + 1) * c_star_upper))


@dataclass(frozen=True)
class KappaReport:
    """Where the tail of a potential becomes tau-small."""

    tau: float
    delta: float       # largest delta with sup |m| < tau on (1/3 - delta, 1/3)
    kappa: float       # first zero-contact midpoint past 1/3 - delta
    level: int         # ladder level whose midpoint kappa is


def kappa_report(m: co.Potential, tau: float,
                 grid_per_segment: int = 257) -> KappaReport:
    """Locate the fold point for tolerance tau.

    delta(tau) comes from the last grid point left of 1/3 where |m|
    reaches tau; kappa is the first retained zero-contact midpoint to the
    right of it. After folding at kappa the potential moves by at most
    2*tau in sup norm, because only the tau-small tail changes sign.
    """
    if not tau > 0.0:
        raise ConstructionError("tau must be positive")
    contacts = np.sort(np.asarray(m.contact_points, dtype=float))
    if contacts.size == 0:
        raise ConstructionError("potential exposes no zero-contact midpoints")
    lo = float(m.schedule.delta)
    grid = np.unique(np.concatenate([
        np.linspace(a, b, grid_per_segment)
        for a, b in zip(m.half.breaks[:-1], m.half.breaks[1:])
        if b > lo - 1e-14
    ]))
    grid = grid[(grid >= lo) & (grid <= co.CORE_LEFT)]
    vals = np.abs(m.value(grid))
    big = np.where(vals >= tau)[0]
    r_last = float(grid[big[-1]]) if big.size else lo
    hit = np.where(contacts > r_last + 1e-14)[0]
    if hit.size == 0:
        raise ConstructionError(
            f"tau={tau:g} is below the deepest retained tail amplitude "
            f"{m.tail_bound(m.depth):g}; rebuild the ladder with a larger "
            "truncation depth")
    kap = float(contacts[hit[0]])
    z = np.asarray(m.schedule.z, dtype=float)
    lev_hit = np.where(np.abs(z - kap) <= 1e-12)[0]
    level = int(lev_hit[0]) if lev_hit.size else m.depth + 1
    if level > m.depth:
        # only the truncation join qualifies: folding there is a no-op
        raise ConstructionError(
            f"tau={tau:g} is below the deepest retained tail amplitude "
            f"{m.tail_bound(m.depth):g}; rebuild the ladder with a larger "
            "truncation depth")
    return KappaReport(tau, co.CORE_LEFT - r_last, kap, level)


def kappa(m: co.Potential, tau: float) -> float:
    """Fold radius for tolerance tau (see kappa_report)."""
    return kappa_report(m, tau).kappa


@dataclass(frozen=True)
class ContinuityReport:
    """Two-potential eigenvalue shift against the sup-norm budget."""

    s: float
    lambda_1: float
    lambda_2: float
    shift: float
    sup_dist: float
    budget: float      # c^*(e^{4 s ||m1 - m2||_inf} - 1) + slack
    ok: bool

    def as_dict(self) -> dict:
        return {
            "s": self.s, "lambda_1": self.lambda_1, "lambda_2": self.lambda_2,
            "shift": self.shift, "sup_dist": self.sup_dist,
            "budget": self.budget, "pass": self.ok,
        }


def check_continuity_bound(m1: co.Potential, m2: co.Potential,
                           reaction: co.Reaction, s: float, d: int = 1,
                           bc=("N", "N"), target_elems: int = 600,
                           slack: float = 1e-6) -> ContinuityReport:
    """Verify |lambda(s,m1) - lambda(s,m2)| <= c^*(e^{4s||m1-m2||} - 1).

    ``slack`` is a relative solver tolerance added to the right side: the
    bound is exact for the continuum operators, and the two discrete
    eigenvalues carry independent discretisation errors.
    """
    r1 = es.solve_principal(m1, reaction, d=d, s=s, bc=bc,
                            target_elems=target_elems)
    r2 = es.solve_principal(m2, reaction, d=d, s=s, bc=bc,
                            target_elems=target_elems)
    dist = co.sup_distance(m1, m2)
    c_up = reaction.c_sup
    budget = c_up * math.expm1(4.0 * s * dist)
    shift = abs(r1.eigenvalue - r2.eigenvalue)
    tol = slack * max(1.0, abs(r1.eigenvalue), abs(r2.eigenvalue))
    return ContinuityReport(s, r1.eigenvalue, r2.eigenvalue, shift, dist,
                            budget, shift <= budget + tol)


@dataclass(frozen=True)
class SwitchResult:
    s: float
    achieved: float
    samples: tuple  # (s, lambda) pairs scanned, in order


def find_switch_s(m: co.Potential, reaction: co.Reaction, target: float,
                  gap: float, s_min: float, *, d: int = 1, bc=("N", "N"),
                  growth: float = 1.1, s_cap: float = 2080.0,
                  target_elems: int = 600) -> SwitchResult:
    """First geometric-grid drift rate past s_min with |lambda - target| < gap.

    The hit is confirmed by a fresh solve on a uniformly refined mesh
    before being accepted. Failure to reach the gap before the cap is an
    explicit error reporting the best gap achieved.
    """
    if not gap > 0.0:
        raise ConstructionError("gap must be positive")
    lo, hi = reaction.c_star, reaction.c_sup
    if not lo - gap <= target <= hi + gap:
        raise ConstructionError(
            f"target {target:g} outside the reachable band "
            f"[{lo:g}, {hi:g}] widened by the gap")
    samples = []
    best = math.inf
    s = s_min * growth
    while s <= s_cap:
        res = es.solve_principal(m, reaction, d=d, s=s, bc=bc,
                                 target_elems=target_elems)
        lam = res.eigenvalue
        samples.append((s, lam))
        err = abs(lam - target)
        best = min(best, err)
        if err < gap:
            confirm = es.solve_principal(m, reaction, d=d, s=s, bc=bc,
                                         target_elems=2 * target_elems)
            if abs(confirm.eigenvalue - target) < gap:
                return SwitchResult(s, confirm.eigenvalue, tuple(samples))
            best = min(best, abs(confirm.eigenvalue - target))
        s *= growth
    raise ConstructionError(
        f"no drift rate in ({s_min:g}, {s_cap:g}] brings lambda within "
        f"{gap:g} of {target:g}; best gap achieved {best:g} "
        "(increase the cap, the mesh resolution, or the ladder depth)")


@dataclass(frozen=True)
class MembershipSearchResult:
    schedule: co.OscillationSchedule
    report: co.MembershipReport
    level_offset: int


def search_membership_schedule(m: co.Potential, kappa_radius: float,
                               fold_level: int,
                               alpha_step: float = 0.005,
                               beta_step: float = 0.04,
                               search_grid: int = 2000) -> MembershipSearchResult:
    """Find a step envelope anchored at the fold point that certifies m.

    A folded potential belongs to the opposite family by exhibiting some
    schedule whose envelope dominates it on the envelope's own ladder
    region [kappa, 1/3). The search scans the shape parameter(s) on a
    fine grid, shifting the envelope's amplitude ladder down so its first
    level matches the first flipped level (NN envelopes start at level 1,
    DD envelopes at level 0, hence the family-dependent offset); the
    winning candidate is re-verified at full grid resolution.
    """
    family = m.family
    if family == co.FAMILY_NN:
        offsets = [max(fold_level - 1, 0), fold_level]
    else:
        offsets = [fold_level, max(fold_level - 1, 0)]
    depths = [dep for dep in (m.depth - fold_level, m.depth - fold_level - 1, 1)
              if dep >= 1]
    alphas = np.arange(1.0 / 6.0 + alpha_step, 1.0 - alpha_step, alpha_step)
    for offset in dict.fromkeys(offsets):
        for depth in dict.fromkeys(depths):
            for a in alphas:
                betas = ([None] if family == co.FAMILY_NN
                         else np.arange(a + beta_step, 1.0 - 1e-9, beta_step))
                for b in betas:
                    try:
                        cand = co.make_schedule(family, kappa_radius, float(a),
                                                None if b is None else float(b),
                                                depth)
                    except co.CoefficientError:
                        continue
                    rep = co.verify_membership(m, family, cand, offset,
                                               grid_per_level=search_grid)
                    if rep.ok:
                        full = co.verify_membership(m, family, cand, offset)
                        if full.ok:
                            return MembershipSearchResult(cand, full, offset)
    raise ConstructionError(
        f"no {family} envelope anchored at {kappa_radius:.9f} certifies the "
        "folded potential (searched alpha grid step "
        f"{alpha_step}); deepen the base ladder or refine the search")


@dataclass(frozen=True)
class StepRecord:
    n: int
    family: str            # family of m_n while the switch rate was found
    s: float
    threshold: float
    tau: float
    delta_tau: float
    kappa: float
    target: float
    achieved: float
    gap: float             # allowed |achieved - target|
    fold_shift: float      # measured |lambda(s, m_n) - lambda(s, m_{n+1})|
    fold_budget: float     # c^*(e^{8/s} - 1)
    membership_alpha: float
    membership_beta: float | None
    membership_offset: int
    samples: tuple = ()

    def as_dict(self) -> dict:
        out = {
            "n": self.n, "family": self.family, "s": self.s,
            "threshold": self.threshold, "tau": self.tau,
            "delta_tau": self.delta_tau, "kappa": self.kappa,
            "target": self.target, "achieved": self.achieved,
            "gap": self.gap, "fold_shift": self.fold_shift,
            "fold_budget": self.fold_budget,
            "membership_alpha": self.membership_alpha,
            "membership_offset": self.membership_offset,
        }
        if self.membership_beta is not None:
            out["membership_beta"] = self.membership_beta
        return out


@dataclass(frozen=True)
class ConstructionTrace:
    steps: tuple
    rho: float
    c_star_upper: float
    truncation_certificate: float   # c^*(e^{4 s_max 2(1/6)^N} - 1)
    final_lambdas: tuple            # lambda(s_n, m_hat) for every recorded s_n
    amplitude: float                # max - min of final_lambdas

    def jsonl(self) -> str:
        lines = [json.dumps(st.as_dict(), sort_keys=True)
                 for st in self.steps]
        lines.append(json.dumps({
            "rho": self.rho,
            "c_star_upper": self.c_star_upper,
            "truncation_certificate": self.truncation_certificate,
            "final_lambdas": list(self.final_lambdas),
            "amplitude": self.amplitude,
        }, sort_keys=True))
        return "\n".join(lines) + "\n"


def write_trace(trace: ConstructionTrace, path: str) -> None:
    """Atomically write the step trace as JSON lines."""
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(trace.jsonl())
    os.replace(tmp, path)


@dataclass(frozen=True)
class ConstructionConfig:
    reaction: co.Reaction
    schedule: co.OscillationSchedule
    depth_max: int = 2
    d: int = 1
    bc: tuple = ("N", "N")
    s_growth: float = 1.1
    s_cap: float = 2080.0
    target_elems: int = 600
    gap_fractions: tuple | None = None   # default: rho/(n+1) at step n
    verify_folds: bool = True

    def __post_init__(self):
        if self.depth_max < 1:
            raise ConstructionError("depth_max must be at least 1")
        if self.schedule.family != co.FAMILY_DD:
            raise ConstructionError("construction starts from a DD schedule")
        if self.gap_fractions is not None:
            fr = tuple(float(f) for f in self.gap_fractions)
            if len(fr) < self.depth_max or any(f <= 0 for f in fr) \
                    or any(a < b for a, b in zip(fr, fr[1:])):
                raise ConstructionError(
                    "gap fractions must be positive and non-increasing, "
                    "one per step")
            object.__setattr__(self, "gap_fractions", fr)


def run_construction(config: ConstructionConfig,
                     refvals: es.ReferenceEigenvalues | None = None,
                     trace_path: str | None = None):
    """Alternate switch-rate search and tail folds for depth_max steps.

    Returns (ConstructionTrace, truncated potential). On a step failure
    the raised ConstructionError carries the partial trace, and a partial
    trace file is still written when ``trace_path`` is given.
    """
    reaction = config.reaction
    if refvals is None:
        refvals = es.reference_eigenvalues(reaction, d=config.d)
    gap_total = rho(refvals)
    c_up = reaction.c_sup
    m = co.build_sdd(config.schedule)
    steps = []
    s_prev = 0.0
    kappa_prev = 0.0
    visited_s = []

    def partial_trace():
        return ConstructionTrace(tuple(steps), gap_total, c_up,
                                 math.nan, (), math.nan)

    def fail(msg):
        tr = partial_trace()
        if trace_path is not None:
            write_trace(tr, trace_path)
        raise ConstructionError(msg, tr)

    for n in range(1, config.depth_max + 1):
        target = (refvals.lambda_dd if m.family == co.FAMILY_DD
                  else refvals.lambda_nn)
        if config.gap_fractions is not None:
            gap = gap_total * config.gap_fractions[n - 1]
        else:
            gap = gap_total / (n + 1)
        thr = threshold_s(n, gap_total, c_up)
        s_min = max(s_prev, thr)
        try:
            hit = find_switch_s(m, reaction, target, gap, s_min,
                                d=config.d, bc=config.bc,
                                growth=config.s_growth, s_cap=config.s_cap,
                                target_elems=config.target_elems)
        except ConstructionError as exc:
            fail(f"step {n}: {exc}")
        tau = 1.0 / hit.s ** 2
        try:
            kap = kappa_report(m, tau)
        except ConstructionError as exc:
            fail(f"step {n}: {exc}")
        if kap.kappa <= kappa_prev:
            fail(f"step {n}: fold point {kap.kappa:g} did not advance past "
                 f"{kappa_prev:g}; drift rates grew too slowly")
        m_next = co.fold_tail(m, kap.kappa)
        budget = c_up * math.expm1(8.0 / hit.s)
        cont = check_continuity_bound(m, m_next, reaction, hit.s,
                                      d=config.d, bc=config.bc,
                                      target_elems=config.target_elems)
        if cont.shift > budget + 1e-6 * max(1.0, abs(cont.lambda_1)):
            fail(f"step {n}: fold moved lambda by {cont.shift:g}, over the "
                 f"budget {budget:g}")
        if not cont.ok:
            fail(f"step {n}: continuity bound violated "
                 f"(shift {cont.shift:g} > {cont.budget:g})")
        if config.verify_folds:
            try:
                mem = search_membership_schedule(m_next, kap.kappa, kap.level)
            except ConstructionError as exc:
                fail(f"step {n}: {exc}")
            mem_alpha = mem.schedule.alpha
            mem_beta = mem.schedule.beta
            mem_offset = mem.level_offset
        else:
            mem_alpha, mem_beta, mem_offset = math.nan, None, 0
        steps.append(StepRecord(
            n, m.family, hit.s, thr, tau, kap.delta, kap.kappa, target,
            hit.achieved, gap, cont.shift, budget,
            mem_alpha, mem_beta, mem_offset, hit.samples))
        visited_s.append(hit.s)
        m = m_next
        s_prev = hit.s
        kappa_prev = kap.kappa

    s_max = visited_s[-1]
    tail_amp = 2.0 * float(m.schedule.level_amplitude(m.depth + 1))
    certificate = c_up * math.expm1(4.0 * s_max * tail_amp)
    finals = []
    for s_n in visited_s:
        res = es.solve_principal(m, reaction, d=config.d, s=s_n,
                                 bc=config.bc,
                                 target_elems=config.target_elems)
        finals.append(res.eigenvalue)
    amplitude = max(finals) - min(finals) if len(finals) > 1 else 0.0
    trace = ConstructionTrace(tuple(steps), gap_total, c_up, certificate,
                              tuple(finals), amplitude)
    if trace_path is not None:
        write_trace(trace, trace_path)
    return trace, m
