"""Oscillating drift potentials and reaction coefficients on [0, 1].

The drift potential m(r) is an even-about-1/2, C^1 function that vanishes
on the core interval [1/3, 2/3] and oscillates on [delta, 1/3) over a
geometric ladder of intervals accumulating at 1/3. Two step envelopes
bound the admissible families:

* DD family: m dominates a step envelope with dips -(1/6)^n and plateaus
  +2*(1/6)^n on ladder level n.
* NN family: m is dominated by a step envelope with peaks +(1/6)^n and
  dips -2*(1/6)^n.

Interval lengths follow the ratios alpha (and beta for the DD family)
scaled by a normalisation theta so the ladder tiles [delta, 1/3) exactly;
the raw geometric sums cannot equal 1/3 - delta for ratios above 1/6, so
the scale factor is the only way to make the families non-empty while
keeping every length ratio intact.

Concrete C^1 representatives are piecewise quintic (C^2 joins), which
keeps second derivatives available and gives exact zero-contact midpoints
z_n where tail folds (sign flips past z_n) remain C^1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

H_BASE = 1.0 / 6.0
CORE_LEFT = 1.0 / 3.0
CORE_RIGHT = 2.0 / 3.0
_BREAK_TOL = 1e-14

FAMILY_DD = "DD"
FAMILY_NN = "NN"


class CoefficientError(ValueError):
    """Invalid schedule/potential/reaction parameters."""


# quintic smoothstep u -> 6u^5 - 15u^4 + 10u^3 (value and first two
# derivatives vanish at u=0; value 1, derivatives 0 at u=1)
_SMOOTHSTEP = np.array([6.0, -15.0, 10.0, 0.0, 0.0, 0.0])


def _step_coeffs(length: float, v0: float, v1: float) -> np.ndarray:
    """Descending-power coefficients of v0 + (v1-v0)*S((r-a)/length)."""
    scale = (v1 - v0) / np.array(
        [length**5, length**4, length**3, 1.0, 1.0, 1.0]
    )
    c = _SMOOTHSTEP * scale
    c[-1] += v0
    return c


class PiecewisePoly:
    """Piecewise polynomial on [breaks[0], breaks[-1]].

    Coefficients are stored per segment in descending powers of the local
    variable t = r - breaks[i].
    """

    __slots__ = ("breaks", "coeffs", "_dcoeffs")

    def __init__(self, breaks, coeffs):
        self.breaks = np.asarray(breaks, dtype=float)
        if self.breaks.ndim != 1 or self.breaks.size < 2:
            raise CoefficientError("need at least one segment")
        if np.any(np.diff(self.breaks) <= 0):
            raise CoefficientError("breaks must be strictly increasing")
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape[0] != self.breaks.size - 1:
            raise CoefficientError("one coefficient row per segment required")
        k = self.coeffs.shape[1]
        self._dcoeffs = self.coeffs[:, :-1] * np.arange(k - 1, 0, -1)[None, :]

    def _segments_of(self, r):
        idx = np.searchsorted(self.breaks, r, side="right") - 1
        return np.clip(idx, 0, self.breaks.size - 2)

    def _eval(self, r, coeffs):
        r = np.asarray(r, dtype=float)
        idx = self._segments_of(r)
        t = r - self.breaks[idx]
        out = np.zeros_like(t)
        for j in range(coeffs.shape[1]):
            out = out * t + coeffs[idx, j]
        return out

    def value(self, r):
        return self._eval(r, self.coeffs)

    def derivative(self, r):
        return self._eval(r, self._dcoeffs)

    def negate_from(self, r0: float) -> "PiecewisePoly":
        """Flip the sign of every segment starting at or after r0."""
        coeffs = self.coeffs.copy()
        flip = self.breaks[:-1] >= r0 - _BREAK_TOL
        coeffs[flip] *= -1.0
        return PiecewisePoly(self.breaks, coeffs)


@dataclass(frozen=True)
class OscillationSchedule:
    """Breakpoint ladder for one envelope family on [delta, 1/3).

    DD levels n = 0..depth: dip [x_n, y_n] (midpoint z_n), plateau
    [y_n, x_{n+1}], with lengths theta*alpha^{n+1} and theta*beta^{n+1}.
    NN levels n = 1..depth: peak [Y_{n-1}, X_n], dip [X_n, Y_n], both of
    length theta*alpha^n. Arrays run one level past ``depth`` so the
    truncation joins have named endpoints.
    """

    family: str
    delta: float
    alpha: float
    beta: float | None
    depth: int
    theta: float
    x: np.ndarray  # DD: x_n (n=0..depth+1); NN: X_n (n=1..depth+1)
    y: np.ndarray  # DD: y_n (n=0..depth+1); NN: Y_n (n=0..depth+1)
    z: np.ndarray  # contact midpoints: DD z_n; NN peak midpoints Z_n

    @property
    def h(self) -> float:
        return H_BASE

    def level_amplitude(self, n) -> np.ndarray:
        """Unsigned base amplitude (1/6)^n of ladder level n (min level 1)."""
        n = np.asarray(n)
        return H_BASE ** np.maximum(n, 1)

    def oscillation_intervals(self):
        """All ladder intervals down to the truncation depth, left half."""
        out = []
        if self.family == FAMILY_DD:
            for n in range(self.depth + 1):
                out.append((self.x[n], self.y[n]))
                out.append((self.y[n], self.x[n + 1]))
        else:
            for n in range(1, self.depth + 1):
                out.append((self.y[n - 1], self.x[n]))
                out.append((self.x[n], self.y[n]))
        return out

    def breakpoints(self) -> np.ndarray:
        """Every ladder point (including midpoints) on both halves of [0,1]."""
        left = np.concatenate(
            [[self.delta], self.x, self.y, self.z, [CORE_LEFT, CORE_RIGHT]]
        )
        left = left[(left >= 0.0) & (left <= 1.0)]
        pts = np.concatenate([left, 1.0 - left])
        return np.unique(np.round(pts / _BREAK_TOL) * _BREAK_TOL)

    def to_json(self) -> dict:
        out = {
            "family": self.family,
            "delta": self.delta,
            "alpha": self.alpha,
            "depth": self.depth,
            "theta": self.theta,
        }
        if self.beta is not None:
            out["beta"] = self.beta
        return out


def make_schedule(family: str, delta: float, alpha: float,
                  beta: float | None = None, depth: int = 4) -> OscillationSchedule:
    """Build the breakpoint ladder of one envelope family.

    The normalisation theta is fixed by requiring the full (infinite)
    ladder to tile [delta, 1/3):  theta*sum(alpha^i + beta^i) = 1/3 - delta
    for DD, theta*2*sum(alpha^i) = 1/3 - delta for NN.
    """
    if family not in (FAMILY_DD, FAMILY_NN):
        raise CoefficientError(f"unknown family {family!r}")
    if not 0.0 < delta < CORE_LEFT:
        raise CoefficientError("delta must lie in (0, 1/3)")
    if not 0.0 < alpha < 1.0:
        raise CoefficientError("alpha must lie in (0, 1)")
    if depth < 1:
        raise CoefficientError("depth must be at least 1")
    span = CORE_LEFT - delta

    if family == FAMILY_DD:
        if beta is None or not alpha < beta < 1.0:
            raise CoefficientError("DD family requires alpha < beta < 1")
        theta = span / (alpha / (1 - alpha) + beta / (1 - beta))
        n_top = depth + 1
        x = np.empty(n_top + 1)
        y = np.empty(n_top + 1)
        x[0] = delta
        for n in range(n_top + 1):
            y[n] = x[n] + theta * alpha ** (n + 1)
            if n < n_top:
                x[n + 1] = y[n] + theta * beta ** (n + 1)
        z = 0.5 * (x + y)
        return OscillationSchedule(FAMILY_DD, delta, alpha, beta, depth,
                                   theta, x, y, z)

    if beta is not None:
        raise CoefficientError("NN family takes no beta")
    theta = span * (1 - alpha) / (2 * alpha)
    n_top = depth + 1
    y = np.empty(n_top + 1)
    x = np.empty(n_top + 1)  # x[0] unused placeholder = delta
    y[0] = delta
    x[0] = delta
    for n in range(1, n_top + 1):
        x[n] = y[n - 1] + theta * alpha**n
        y[n] = x[n] + theta * alpha**n
    z = np.empty(n_top + 1)
    z[0] = delta
    z[1:] = 0.5 * (y[:-1] + x[1:])  # midpoints of the peak intervals
    return OscillationSchedule(FAMILY_NN, delta, alpha, None, depth,
                               theta, x, y, z)


def envelope(schedule: OscillationSchedule, r):
    """Step envelope value of the schedule's family at radius r.

    Mirrors via r -> 1-r, returns 0 on the core interval and beyond the
    truncation depth. Raises outside [delta, 1-delta].
    """
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r).copy()
    if np.any((r < schedule.delta - _BREAK_TOL)
              | (r > 1.0 - schedule.delta + _BREAK_TOL)):
        raise CoefficientError("envelope undefined outside [delta, 1-delta]")
    right = r > 0.5
    r[right] = 1.0 - r[right]
    out = np.zeros_like(r)
    side = r < CORE_LEFT - _BREAK_TOL
    rs = r[side]
    vals = np.zeros_like(rs)
    if schedule.family == FAMILY_DD:
        # dip [x_n, y_n): -(1/6)^max(n,1); plateau [y_n, x_{n+1}): +2*(1/6)^max(n,1)
        n_dip = np.searchsorted(schedule.x, rs, side="right") - 1
        for i, (ri, n) in enumerate(zip(rs, n_dip)):
            if n < 0:
                continue
            if n > schedule.depth:
                vals[i] = 0.0
            elif ri < schedule.y[n]:
                vals[i] = -schedule.level_amplitude(n)
            else:
                vals[i] = 2.0 * schedule.level_amplitude(n)
    else:
        # peak [Y_{n-1}, X_n]: +(1/6)^n; dip (X_n, Y_n]: -2*(1/6)^n
        for i, ri in enumerate(rs):
            n = int(np.searchsorted(schedule.y[:-1], ri, side="right"))
            if n < 1:
                continue
            if n > schedule.depth:
                vals[i] = 0.0
            elif ri <= schedule.x[n]:
                vals[i] = schedule.level_amplitude(n)
            else:
                vals[i] = -2.0 * schedule.level_amplitude(n)
    out[side] = vals
    return out[0] if scalar else out


@dataclass(frozen=True)
class Potential:
    """A concrete C^1 radial drift potential, symmetric about r = 1/2.

    ``half`` stores the piecewise-quintic profile on [0, 1/3]; the core
    is identically zero and the right half is the mirror image. ``flips``
    records tail-fold radii in the order they were applied.
    """

    family: str
    schedule: OscillationSchedule
    profile: str
    half: PiecewisePoly
    flips: tuple = ()
    contact_points: tuple = ()
    level_signs: np.ndarray = field(default_factory=lambda: np.array([]))
    min_amplitude: float = 0.0

    def value(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        rm = np.where(r > 0.5, 1.0 - r, r)
        out = np.where(rm < CORE_LEFT, self.half.value(np.minimum(rm, CORE_LEFT)), 0.0)
        return out[0] if scalar else out

    __call__ = value

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        rm = np.where(r > 0.5, 1.0 - r, r)
        d = np.where(rm < CORE_LEFT, self.half.derivative(np.minimum(rm, CORE_LEFT)), 0.0)
        d = np.where(r > 0.5, -d, d)
        return d[0] if scalar else d

    def breakpoints(self) -> np.ndarray:
        left = self.half.breaks
        pts = np.concatenate([left, 1.0 - left, [CORE_LEFT, CORE_RIGHT]])
        return np.unique(np.round(pts / _BREAK_TOL) * _BREAK_TOL)

    @property
    def depth(self) -> int:
        return self.schedule.depth

    def tail_bound(self, level: int) -> float:
        """Sup of |m| on (z_level, 1/3): the deepest amplitude still active."""
        if level > self.depth:
            return 0.0
        return max(2.0 * float(self.schedule.level_amplitude(level)),
                   self.min_amplitude)

    def max_abs(self) -> float:
        return 2.0 * float(self.schedule.level_amplitude(1))

    def to_json(self) -> dict:
        out = self.schedule.to_json()
        out["family"] = self.family
        out["profile"] = self.profile
        out["flips"] = list(self.flips)
        out["min_amplitude"] = self.min_amplitude
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def potential_from_json(data: dict) -> Potential:
    """Rebuild a potential bit-for-bit from its canonical record."""
    sched = make_schedule(data["family"] if not data["flips"] else _base_family(data),
                          data["delta"], data["alpha"], data.get("beta"),
                          data["depth"])
    min_amp = data.get("min_amplitude", 0.0)
    m = (build_sdd(sched, min_amplitude=min_amp)
         if sched.family == FAMILY_DD
         else build_snn(sched, min_amplitude=min_amp))
    for kappa in data["flips"]:
        m = fold_tail(m, kappa)
    return m


def _base_family(data: dict) -> str:
    # each fold toggles the declared family; recover the builder's family
    fam = data["family"]
    if len(data["flips"]) % 2 == 1:
        fam = FAMILY_NN if fam == FAMILY_DD else FAMILY_DD
    return fam


def _dd_plateau(schedule: OscillationSchedule, n: int,
                min_amplitude: float = 0.0) -> float:
    return max(2.0 * float(schedule.level_amplitude(n)), min_amplitude)


def build_sdd(schedule: OscillationSchedule,
              min_amplitude: float = 0.0) -> Potential:
    """C^1 DD-family representative.

    Nonnegative everywhere: each dip interval [x_n, y_n] descends from the
    previous plateau to a second-order contact with zero at the midpoint
    z_n, then climbs to the level-n plateau 2*(1/6)^n held on
    [y_n, x_{n+1}]. Past the truncation depth the profile returns to zero
    with one final contact midpoint.

    ``min_amplitude`` floors the plateau heights. Membership only needs
    the profile to dominate the step envelope, so raising deep plateaus
    is legal, and it moves the large-drift concentration regime to
    moderate s (a plateau insulates once 2*s*height is large).
    """
    if schedule.family != FAMILY_DD:
        raise CoefficientError("build_sdd needs a DD schedule")
    if not 0.0 <= min_amplitude <= 2.0 * H_BASE:
        raise CoefficientError("min_amplitude must lie in [0, 1/3]")
    breaks = [0.0, schedule.delta]
    coeffs = [np.zeros(6)]
    p_prev = 0.0
    n_levels = schedule.depth + 1
    contacts = []
    for n in range(n_levels):
        x_n, y_n, z_n = schedule.x[n], schedule.y[n], schedule.z[n]
        p_n = _dd_plateau(schedule, n, min_amplitude)
        coeffs.append(_step_coeffs(z_n - x_n, p_prev, 0.0))
        breaks.append(z_n)
        contacts.append(z_n)
        coeffs.append(_step_coeffs(y_n - z_n, 0.0, p_n))
        breaks.append(y_n)
        coeffs.append(np.array([0, 0, 0, 0, 0, p_n], dtype=float))
        breaks.append(schedule.x[n + 1])
        p_prev = p_n
    # truncation: one last descent to zero, contact at z[depth+1]
    x_t, z_t = schedule.x[n_levels], schedule.z[n_levels]
    coeffs.append(_step_coeffs(z_t - x_t, p_prev, 0.0))
    breaks.append(z_t)
    contacts.append(z_t)
    coeffs.append(np.zeros(6))
    breaks.append(CORE_LEFT)
    half = PiecewisePoly(np.array(breaks), np.array(coeffs))
    return Potential(FAMILY_DD, schedule, "smooth_bump", half,
                     contact_points=tuple(contacts),
                     level_signs=np.ones(n_levels + 1),
                     min_amplitude=min_amplitude)


def build_snn(schedule: OscillationSchedule,
              min_amplitude: float = 0.0) -> Potential:
    """C^1 NN-family representative.

    Nonpositive everywhere: within each peak interval the profile returns
    to a zero contact at the midpoint, then descends to the dip value
    -2*(1/6)^n held on [X_n, Y_n]; the step envelope dominates it from
    above throughout.

    ``min_amplitude`` floors the dip depths. Membership only requires the
    step envelope to dominate from above, so deepening the dips is legal;
    it moves the large-drift concentration regime to moderate s.
    """
    if schedule.family != FAMILY_NN:
        raise CoefficientError("build_snn needs an NN schedule")
    if not 0.0 <= min_amplitude <= 2.0 * H_BASE:
        raise CoefficientError("min_amplitude must lie in [0, 1/3]")
    breaks = [0.0, schedule.delta]
    coeffs = [np.zeros(6)]
    q_prev = 0.0
    contacts = []
    for n in range(1, schedule.depth + 1):
        y_prev, x_n, y_n, z_n = (schedule.y[n - 1], schedule.x[n],
                                 schedule.y[n], schedule.z[n])
        q_n = -max(2.0 * float(schedule.level_amplitude(n)), min_amplitude)
        coeffs.append(_step_coeffs(z_n - y_prev, q_prev, 0.0))
        breaks.append(z_n)
        contacts.append(z_n)
        coeffs.append(_step_coeffs(x_n - z_n, 0.0, q_n))
        breaks.append(x_n)
        coeffs.append(np.array([0, 0, 0, 0, 0, q_n], dtype=float))
        breaks.append(y_n)
        q_prev = q_n
    y_t = schedule.y[schedule.depth]
    w_t = 0.5 * (y_t + CORE_LEFT)
    coeffs.append(_step_coeffs(w_t - y_t, q_prev, 0.0))
    breaks.append(w_t)
    contacts.append(w_t)
    coeffs.append(np.zeros(6))
    breaks.append(CORE_LEFT)
    half = PiecewisePoly(np.array(breaks), np.array(coeffs))
    return Potential(FAMILY_NN, schedule, "smooth_bump", half,
                     contact_points=tuple(contacts),
                     level_signs=-np.ones(schedule.depth + 1),
                     min_amplitude=min_amplitude)


def fold_tail(m: Potential, kappa: float) -> Potential:
    """Flip the sign of m on (kappa, 1/3) and mirror on the right half.

    kappa must be a zero-contact point (value and derivative vanish), so
    the fold stays C^1. Folding twice at the same point is the identity.
    """
    contacts = np.asarray(m.contact_points)
    hit = np.where(np.abs(contacts - kappa) <= _BREAK_TOL)[0]
    if hit.size == 0 or abs(float(m.value(kappa))) > 1e-12 \
            or abs(float(m.derivative(kappa))) > 1e-12:
        raise CoefficientError(
            f"fold point {kappa!r} is not a zero-contact midpoint")
    kappa = float(contacts[hit[0]])
    half = m.half.negate_from(kappa)
    flips = list(m.flips)
    if flips and flips[-1] == kappa:
        flips.pop()
    else:
        flips.append(kappa)
    family = FAMILY_NN if m.family == FAMILY_DD else FAMILY_DD
    signs = m.level_signs.copy()
    level_start = int(np.searchsorted(m.schedule.z, kappa - _BREAK_TOL))
    signs[level_start:] *= -1
    return replace(m, family=family, half=half, flips=tuple(flips),
                   level_signs=signs)


def derivative_jump(p: PiecewisePoly) -> float:
    """Largest one-sided derivative mismatch across interior breakpoints.

    Exact (polynomial evaluation, no finite differences): compares each
    segment's derivative at its right endpoint with the next segment's
    derivative at its left endpoint.
    """
    worst = 0.0
    for i in range(p.breaks.size - 2):
        t = p.breaks[i + 1] - p.breaks[i]
        left = 0.0
        for j in range(p._dcoeffs.shape[1]):
            left = left * t + p._dcoeffs[i, j]
        right = p._dcoeffs[i + 1, -1]
        worst = max(worst, abs(left - right))
    return worst


def sample_grid(m1: Potential, m2: Potential | None = None,
                per_segment: int = 65) -> np.ndarray:
    """Dense grid on [0,1] resolving every retained segment of both inputs."""
    pts = [m1.breakpoints()]
    if m2 is not None:
        pts.append(m2.breakpoints())
    base = np.unique(np.concatenate(pts))
    fill = [
        np.linspace(a, b, per_segment)
        for a, b in zip(base[:-1], base[1:])
    ]
    return np.unique(np.concatenate(fill))


def sup_distance(m1: Potential, m2: Potential) -> float:
    """Max of |m1 - m2| over a grid resolving both ladders."""
    grid = sample_grid(m1, m2)
    return float(np.max(np.abs(m1.value(grid) - m2.value(grid))))


@dataclass(frozen=True)
class MembershipReport:
    family: str
    envelope_ok: bool
    c1_ok: bool
    vanishing_ok: bool
    symmetric_ok: bool
    worst_envelope_margin: float  # >= 0 means envelope satisfied
    worst_derivative_jump: float
    level_offset: int = 0

    @property
    def ok(self) -> bool:
        return (self.envelope_ok and self.c1_ok and self.vanishing_ok
                and self.symmetric_ok)


def verify_membership(m: Potential, family: str,
                      schedule: OscillationSchedule,
                      level_offset: int = 0,
                      grid_per_level: int = 10_000,
                      tol: float = 1e-10,
                      deriv_tol: float = 1e-8) -> MembershipReport:
    """Check family membership of m against a schedule's step envelope.

    Grid-based: pointwise envelope domination on [delta, 1/3), C^1 joins
    (derivative jumps across every stored breakpoint), vanishing on the
    core interval and r -> 1-r symmetry. ``level_offset`` shifts the
    envelope's amplitude ladder, which is how folded tails are checked
    against schedules anchored near 1/3.
    """
    pieces = []
    if family == FAMILY_DD:
        for n in range(schedule.depth + 1):
            amp = float(schedule.level_amplitude(n + level_offset))
            pieces.append((schedule.x[n], schedule.y[n], -amp, True))
            pieces.append((schedule.y[n], schedule.x[n + 1], 2 * amp, True))
    else:
        for n in range(1, schedule.depth + 1):
            amp = float(schedule.level_amplitude(n + level_offset))
            pieces.append((schedule.y[n - 1], schedule.x[n], amp, False))
            pieces.append((schedule.x[n], schedule.y[n], -2 * amp, False))
    npts = max(16, grid_per_level // 2)
    worst = np.inf
    for a, b, env, lower in pieces:
        rr = np.linspace(a, b, npts)
        mv = m.value(rr)
        margin = np.min(mv - env) if lower else np.min(env - mv)
        worst = min(worst, float(margin))
    envelope_ok = worst >= -tol

    worst_jump = derivative_jump(m.half)
    c1_ok = worst_jump <= deriv_tol

    core = np.linspace(CORE_LEFT, CORE_RIGHT, 257)
    vanishing_ok = bool(np.max(np.abs(m.value(core))) <= tol)
    sym = np.linspace(0.0, 1.0, 2049)
    symmetric_ok = bool(np.max(np.abs(m.value(sym) - m.value(1.0 - sym))) <= tol)
    return MembershipReport(family, envelope_ok, c1_ok, vanishing_ok,
                            symmetric_ok, worst, worst_jump, level_offset)


@dataclass(frozen=True)
class BumpPotential:
    """Single non-degenerate C^1 bump, used for the large-drift sanity runs."""

    height: float = 0.25
    center: float = 0.5
    width: float = 0.2

    def value(self, r):
        r = np.asarray(r, dtype=float)
        u = (r - self.center) / self.width
        inside = np.abs(u) < 0.5
        out = np.where(inside, self.height * np.cos(np.pi * u) ** 2, 0.0)
        return out if out.ndim else float(out)

    __call__ = value

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        u = (r - self.center) / self.width
        inside = np.abs(u) < 0.5
        d = np.where(
            inside,
            -self.height * np.pi / self.width * np.sin(2 * np.pi * u),
            0.0,
        )
        return d if d.ndim else float(d)

    def breakpoints(self) -> np.ndarray:
        return np.array([self.center - 0.5 * self.width,
                         self.center + 0.5 * self.width])

    def max_abs(self) -> float:
        return abs(self.height)


@dataclass(frozen=True)
class Reaction:
    """Radial reaction coefficient: core plateau c_in, outer plateau c_out.

    C^1 quintic ramps of width ``ramp`` connect the plateaus just outside
    the core interval. If the inputs are not strictly positive the usual
    positivity shift (add max|c|) is applied and recorded in ``offset``;
    eigenvalues are reported with the offset removed.
    """

    c_in: float
    c_out: float
    ramp: float
    offset: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.ramp < CORE_LEFT:
            raise CoefficientError("ramp width must lie in (0, 1/3)")

    @property
    def c_star(self) -> float:
        """min of the (shifted) coefficient."""
        return min(self.c_in, self.c_out) + self.offset

    @property
    def c_sup(self) -> float:
        """max of the (shifted) coefficient."""
        return max(self.c_in, self.c_out) + self.offset

    def value(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        rm = np.where(r > 0.5, 1.0 - r, r)
        lo = CORE_LEFT - self.ramp
        u = np.clip((rm - lo) / self.ramp, 0.0, 1.0)
        s = ((6.0 * u - 15.0) * u + 10.0) * u**3
        out = self.c_out + (self.c_in - self.c_out) * s + self.offset
        out[rm >= CORE_LEFT] = self.c_in + self.offset
        return out[0] if scalar else out

    __call__ = value

    def breakpoints(self) -> np.ndarray:
        lo = CORE_LEFT - self.ramp
        return np.array([lo, CORE_LEFT, CORE_RIGHT, 1.0 - lo])


def build_reaction(c_in: float, c_out: float, ramp: float = 0.05) -> Reaction:
    """Reaction with core value c_in and exterior plateau c_out.

    The ramp sits inside [1/3 - ramp, 1/3] so the core interval carries
    exactly c_in (the reference eigenvalues keep their closed forms when
    c_in is constant).
    """
    offset = 0.0
    if min(c_in, c_out) <= 0.0:
        offset = max(abs(c_in), abs(c_out))
    return Reaction(float(c_in), float(c_out), float(ramp), offset)


@dataclass(frozen=True)
class HypothesisReport:
    lambda_dd: float
    lambda_nn: float
    h1: bool
    h2: bool


def verify_h1(c: Reaction, d: int = 1, n_elems: int = 2000) -> HypothesisReport:
    """Check the plateau inequalities c_out > lambda_DD (and > lambda_NN).

    A continuous reaction necessarily dips below lambda_DD inside its ramp
    next to 1/3, so the computable statement is the inequality on the
    exterior plateaus; the DD comparison implies the NN one.
    """
    from . import eigensolver, mesh as mesh_mod

    grid = mesh_mod.build_mesh(None, c, (CORE_LEFT, CORE_RIGHT),
                               target_elems=n_elems)
    ref = eigensolver.reference_eigenvalues(c, d, grid)
    plateau = c.c_out + c.offset - c.offset  # reported scale
    return HypothesisReport(ref.lambda_dd, ref.lambda_nn,
                            plateau > ref.lambda_dd,
                            plateau > ref.lambda_nn)
