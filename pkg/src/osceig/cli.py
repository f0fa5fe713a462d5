"""Command-line front end: experiment orchestration and artifact output.

Every command reads an optional JSON config (with a ``command`` field)
and lets flags override file values. Floating output uses 17 significant
digits; files are written atomically (temp file + rename) so a failed
run never leaves a partial artifact. Exit codes: 0 success, 1 check
failure, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics as asy
from . import coefficients as co
from . import construction as cn
from . import eigensolver as es
from . import oracle as orc

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, obj) -> None:
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    _atomic_write(path, "\n".join(lines) + "\n")


def _workers(cfg) -> int:
    env = os.environ.get("OSCEIG_WORKERS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"OSCEIG_WORKERS must be an integer, got {env!r}")
    return max(1, int(cfg.get("workers", 1)))


def _parallel_map(func, items, workers: int):
    """Map preserving input order; worker count never changes the values."""
    if workers <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _load_config(args, command: str) -> dict:
    cfg = {}
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        declared = cfg.get("command")
        if declared is not None and declared != command:
            raise ConfigError(
                f"config declares command {declared!r}, invoked as {command!r}")
    for key, val in vars(args).items():
        if key in ("config", "func") or val is None:
            continue
        cfg[key] = val
    return cfg


def _reaction_from(cfg) -> co.Reaction:
    return co.build_reaction(float(cfg.get("c_in", 1.0)),
                             float(cfg.get("c_out", 100.0)),
                             float(cfg.get("ramp", 0.002)))


def _schedule_from(cfg) -> co.OscillationSchedule:
    family = cfg.get("family", "DD")
    beta = cfg.get("beta", 1.0 / 3.0 if family == "DD" else None)
    return co.make_schedule(family, float(cfg.get("delta", 1.0 / 6.0)),
                            float(cfg.get("alpha", 0.25)),
                            None if beta is None else float(beta),
                            int(cfg.get("depth", 4)))


def _potential_from(cfg) -> co.Potential:
    if "potential" in cfg:
        with open(cfg["potential"]) as fh:
            return co.potential_from_json(json.load(fh))
    sched = _schedule_from(cfg)
    min_amp = float(cfg.get("min_amplitude", 0.0))
    if sched.family == co.FAMILY_DD:
        return co.build_sdd(sched, min_amplitude=min_amp)
    return co.build_snn(sched, min_amplitude=min_amp)


def _s_grid(cfg) -> np.ndarray:
    s_min = float(cfg.get("s_min", 1.0))
    s_max = float(cfg.get("s_max", 300.0))
    count = int(cfg.get("s_count", 16))
    if count < 1 or s_max < s_min or s_min <= 0:
        raise ConfigError("s grid needs 0 < s_min <= s_max and s_count >= 1")
    if cfg.get("s_spacing", "geometric") == "linear":
        return np.linspace(s_min, s_max, count)
    return np.geomspace(s_min, s_max, count)


def cmd_refvals(args) -> int:
    cfg = _load_config(args, "refvals")
    reaction = _reaction_from(cfg)
    refv = es.reference_eigenvalues(reaction, d=int(cfg.get("d", 1)),
                                    target_elems=int(cfg.get("target_elems",
                                                             2000)))
    out = refv.as_dict()
    out["rho"] = refv.rho
    out["d"] = refv.d
    path = cfg.get("out")
    if path:
        _write_json(path, out)
    print(json.dumps({k: _fmt(v) if isinstance(v, float) else v
                      for k, v in out.items()}, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args, "sweep")
    reaction = _reaction_from(cfg)
    potential = _potential_from(cfg)
    grid = _s_grid(cfg)
    d = int(cfg.get("d", 1))
    bc = tuple(cfg.get("bc", ["N", "N"]))
    target_elems = int(cfg.get("target_elems", 600))
    workers = _workers(cfg)
    from .mesh import build_mesh
    s_cap = float(grid.max())
    span = 2.0 * s_cap * float(np.max(np.abs(potential.value(
        np.linspace(0.0, 1.0, 4097)))))
    if 2.0 * span > es.WEIGHT_LOG_RANGE:
        s_cap *= es.WEIGHT_LOG_RANGE / (2.0 * span)
    mesh = build_mesh(potential, reaction, (0.0, 1.0),
                      target_elems=target_elems, s=s_cap)

    def one(s):
        pts = es.eigenvalue_sweep(potential, reaction, [s], d=d, bc=bc,
                                  mesh=mesh)
        return pts[0]

    points = _parallel_map(one, list(grid), workers)
    rows = [(p.s, p.eigenvalue, p.residual, p.phi_at_one_third, p.overflow)
            for p in points]
    path = cfg.get("out", "sweep.csv")
    _write_csv(path, "s,lambda,residual,phi_at_one_third,overflow_flag", rows)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_efg(args) -> int:
    cfg = _load_config(args, "efg")
    alpha = float(cfg.get("alpha", 0.25))
    eps = float(cfg.get("eps", 0.1))
    grid = _s_grid(cfg)
    rows = []
    for s in grid:
        lad = asy.ladder(alpha, float(s))
        e, f, g = asy.efg(alpha, float(s), lad)
        win = asy.window_indices(lad, eps)
        rows.append((float(s), e, f, g, win.k1, win.k2))
    path = cfg.get("out", "efg.csv")
    _write_csv(path, "s,E,F,G,K1,K2", rows)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    cfg = _load_config(args, "crosscheck")
    n_cases = int(cfg.get("n_cases", 20))
    seed = int(cfg.get("seed", 20260823))
    tol = float(cfg.get("tol", 1e-6))
    d_max = int(cfg.get("d_max", 3))
    s_max = float(cfg.get("s_max", 50.0))
    depth_max = int(cfg.get("depth_max", 2))
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_cases):
        d = int(rng.integers(1, d_max + 1))
        s = float(rng.uniform(0.0, s_max))
        depth = int(rng.integers(1, depth_max + 1))
        family = "DD" if rng.uniform() < 0.5 else "NN"
        alpha = float(rng.uniform(0.2, 0.45))
        if family == "DD":
            beta = float(rng.uniform(alpha + 0.05, 0.9))
            sched = co.make_schedule("DD", 1.0 / 6.0, alpha, beta, depth)
            pot = co.build_sdd(sched)
        else:
            sched = co.make_schedule("NN", 1.0 / 6.0, alpha, None, depth)
            pot = co.build_snn(sched)
        reaction = co.build_reaction(float(rng.uniform(0.5, 2.0)),
                                     float(rng.uniform(5.0, 100.0)),
                                     0.05)
        bc = ("N", "N") if rng.uniform() < 0.5 else ("D", "D")
        rec = orc.crosscheck(f"case-{i:03d}", pot, reaction, d=d, s=s, bc=bc,
                             tol=tol)
        records.append(rec)
    path = cfg.get("out", "crosscheck.jsonl")
    _atomic_write(path, "\n".join(json.dumps(r.as_dict(), sort_keys=True)
                                  for r in records) + "\n")
    n_fail = sum(not r.ok for r in records)
    print(f"{len(records) - n_fail}/{len(records)} crosschecks passed "
          f"(tol {tol:g}); report: {path}")
    return EXIT_OK if n_fail == 0 else EXIT_CHECK_FAILED


def cmd_counterexample(args) -> int:
    cfg = _load_config(args, "counterexample")
    reaction = _reaction_from(cfg)
    sched_cfg = dict(cfg)
    sched_cfg.setdefault("depth", 10)
    sched = _schedule_from(sched_cfg)
    config = cn.ConstructionConfig(
        reaction=reaction, schedule=sched,
        depth_max=int(cfg.get("depth_max", 2)),
        d=int(cfg.get("d", 1)),
        s_growth=float(cfg.get("s_growth", 1.1)),
        s_cap=float(cfg.get("s_cap", 2080.0)),
        target_elems=int(cfg.get("target_elems", 600)))
    trace_path = cfg.get("trace_out", "trace.jsonl")
    trace, m_hat = cn.run_construction(config, trace_path=trace_path)
    pot_path = cfg.get("potential_out", "potential.json")
    _write_json(pot_path, m_hat.to_json())
    # confirmation sweep on a geometric grid that contains every switch rate
    visited = [st.s for st in trace.steps]
    base = np.geomspace(max(min(visited) / 4.0, 1.0), max(visited),
                        int(cfg.get("s_count", 24)))
    grid = np.unique(np.concatenate([base, visited]))
    points = es.eigenvalue_sweep(m_hat, reaction, grid, d=config.d,
                                 target_elems=config.target_elems)
    rows = [(p.s, p.eigenvalue, p.residual, p.phi_at_one_third, p.overflow)
            for p in points]
    sweep_path = cfg.get("sweep_out", "counterexample_sweep.csv")
    _write_csv(sweep_path, "s,lambda,residual,phi_at_one_third,overflow_flag",
               rows)
    lam = np.array([p.eigenvalue for p in points])
    tr = asy.trend(grid, lam)
    trend_path = cfg.get("trend_out", "counterexample_trend.json")
    _write_json(trend_path, tr.as_dict())
    print(f"amplitude {_fmt(trace.amplitude)} over switch rates "
          f"{[_fmt(s) for s in visited]}; rho/2 = {_fmt(trace.rho / 2)}; "
          f"trace: {trace_path}")
    return EXIT_OK


def _verify_refvals(cfg):
    reaction = co.build_reaction(1.0, 100.0, 0.05)
    refv = es.reference_eigenvalues(reaction, target_elems=2000)
    targets = {"NN": 1.0, "ND": 1.0 + 9.0 * math.pi ** 2 / 4.0,
               "DN": 1.0 + 9.0 * math.pi ** 2 / 4.0,
               "DD": 1.0 + 9.0 * math.pi ** 2}
    got = refv.as_dict()
    err = max(abs(got[k] - v) / v for k, v in targets.items())
    return err <= 1e-6, {"max_rel_err": err}


def _verify_bounds(cfg):
    reaction = co.build_reaction(1.0, 100.0, 0.05)
    sched = co.make_schedule("DD", 1.0 / 6.0, 0.25, 1.0 / 3.0, 3)
    pot = co.build_sdd(sched)
    worst = -math.inf
    lo, hi = reaction.c_star, reaction.c_sup
    for s in (0.0, 5.0, 50.0):
        lam = es.solve_principal(pot, reaction, s=s,
                                 target_elems=400).eigenvalue
        worst = max(worst, lo - lam, lam - hi)
    return worst <= 1e-8, {"worst_violation": worst}


def _verify_ladder(cfg):
    worst = 0.0
    for alpha in (0.2, 0.25, 0.5):
        for s in (0.0, 1.0, 10.0, 100.0, 1000.0):
            lad = asy.ladder(alpha, s)
            for n in range(1, min(21, lad.n_eff)):
                lhs = lad.ell(n + 1) - lad.ell(n)
                rhs = lad.sigma(n) * lad.ell(n)
                worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-12, {"worst_identity_gap": worst}


def _verify_continuity(cfg):
    reaction = co.build_reaction(1.0, 100.0, 0.05)
    rng = np.random.default_rng(int(cfg.get("seed", 20260823)))
    n_fail = 0
    n_pairs = int(cfg.get("n_pairs", 10))
    for _ in range(n_pairs):
        alpha = float(rng.uniform(0.2, 0.45))
        depth = int(rng.integers(1, 4))
        sched = co.make_schedule("NN", 1.0 / 6.0, alpha, None, depth)
        m1 = co.build_snn(sched)
        m2 = co.fold_tail(m1, float(m1.contact_points[
            int(rng.integers(0, len(m1.contact_points)))]))
        s = float(rng.choice([1.0, 10.0, 50.0]))
        rep = cn.check_continuity_bound(m1, m2, reaction, s,
                                        target_elems=400)
        n_fail += not rep.ok
    return n_fail == 0, {"pairs": n_pairs, "failures": n_fail}


def _verify_crosscheck(cfg):
    reaction = co.build_reaction(1.0, 100.0, 0.05)
    sched = co.make_schedule("DD", 1.0 / 6.0, 0.25, 1.0 / 3.0, 2)
    pot = co.build_sdd(sched)
    rec = orc.crosscheck("verify", pot, reaction, s=10.0, tol=1e-6)
    return rec.ok, rec.as_dict()


_VERIFY_CHECKS = {
    "refvals": _verify_refvals,
    "bounds": _verify_bounds,
    "ladder": _verify_ladder,
    "continuity": _verify_continuity,
    "crosscheck": _verify_crosscheck,
}


def cmd_verify(args) -> int:
    cfg = _load_config(args, "verify")
    names = cfg.get("checks")
    if names is None:
        names = list(_VERIFY_CHECKS)
    if not names:
        print("warning: empty check list, nothing verified")
        return EXIT_OK
    unknown = [n for n in names if n not in _VERIFY_CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks: {unknown}; "
                          f"available: {sorted(_VERIFY_CHECKS)}")
    summary = {}
    all_ok = True
    for name in names:
        ok, detail = _VERIFY_CHECKS[name](cfg)
        summary[name] = {"pass": bool(ok), "detail": detail}
        all_ok = all_ok and ok
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    path = cfg.get("out")
    if path:
        _write_json(path, summary)
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def _add_common(p):
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--out", help="output file path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="osceig",
        description="principal eigenvalues of radial advection-diffusion "
                    "operators under large oscillating drift")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("refvals", help="four reference eigenvalues on the core")
    _add_common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--c-in", dest="c_in", type=float)
    p.add_argument("--c-out", dest="c_out", type=float)
    p.add_argument("--ramp", type=float)
    p.add_argument("--target-elems", dest="target_elems", type=int)
    p.set_defaults(func=cmd_refvals)

    p = sub.add_parser("sweep", help="eigenvalue sweep over drift rates")
    _add_common(p)
    for name, typ in (("d", int), ("c_in", float), ("c_out", float),
                      ("ramp", float), ("target_elems", int),
                      ("family", str), ("delta", float), ("alpha", float),
                      ("beta", float), ("depth", int),
                      ("min_amplitude", float), ("potential", str),
                      ("s_min", float), ("s_max", float), ("s_count", int),
                      ("s_spacing", str), ("workers", int)):
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("efg", help="boundary-functional decay sweep")
    _add_common(p)
    for name, typ in (("alpha", float), ("eps", float), ("s_min", float),
                      ("s_max", float), ("s_count", int), ("s_spacing", str)):
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)
    p.set_defaults(func=cmd_efg)

    p = sub.add_parser("crosscheck", help="Galerkin vs shooting comparison")
    _add_common(p)
    for name, typ in (("n_cases", int), ("seed", int), ("tol", float),
                      ("d_max", int), ("s_max", float), ("depth_max", int)):
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("counterexample",
                       help="alternating-fold non-convergence demo")
    _add_common(p)
    for name, typ in (("d", int), ("c_in", float), ("c_out", float),
                      ("ramp", float), ("delta", float), ("alpha", float),
                      ("beta", float), ("depth", int), ("depth_max", int),
                      ("s_growth", float), ("s_cap", float),
                      ("target_elems", int), ("s_count", int),
                      ("trace_out", str), ("potential_out", str),
                      ("sweep_out", str), ("trend_out", str)):
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", help="run the invariant battery")
    _add_common(p)
    p.add_argument("--checks", nargs="*", help="subset of checks to run")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-pairs", dest="n_pairs", type=int)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, co.CoefficientError, asy.AsymptoticsError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (es.EigensolverError, orc.OracleError,
            cn.ConstructionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
