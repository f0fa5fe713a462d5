"""Timing comparison: compiled kernels vs the pure-numpy fallback.

Builds both kernel sets directly (independently of the OSCEIG_NO_NUMBA
environment switch), runs the eigenvalue bisection inner loop (Sturm
counts), the tridiagonal solve, and the angle integrator on
representative problem sizes, and prints a speedup table.

Run:  python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from osceig._kernels import build_kernels

try:
    import numba
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def _identity(func):
    return func


def _make_tridiag(n, rng):
    d = rng.uniform(2.0, 4.0, n)
    e = rng.uniform(-1.0, 1.0, n - 1)
    return d, e


def bench(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=200_000,
                    help="matrix dimension for the tridiagonal benchmarks")
    args = ap.parse_args()

    kits = {"numpy": build_kernels(_identity)}
    if HAVE_NUMBA:
        kits["numba"] = build_kernels(
            lambda f: numba.njit(cache=True)(f))
    else:
        print("numba not installed; benchmarking the fallback only")

    rng = np.random.default_rng(0)
    n = args.size
    kd, ko = _make_tridiag(n, rng)
    md, mo = _make_tridiag(n, rng)
    md += 4.0
    rhs = rng.standard_normal(n)

    # piecewise-constant coefficients for the angle integrator
    edges = np.linspace(0.0, 1.0, 2001)
    mp_tab = rng.uniform(-5.0, 5.0, (2000, 1))
    c_tab = rng.uniform(0.5, 2.0, (2000, 1))

    cases = {
        "sturm_count": lambda kit: kit[0](kd, ko, md, mo, 10.0),
        "tridiag_solve": lambda kit: kit[1](ko, kd, ko, rhs.copy()),
        "prufer_theta": lambda kit: kit[2](
            edges, mp_tab, c_tab, 1.0, 10.0, 5.0, np.pi / 2,
            1e-10, 1e-12, 0.0, 1e-6),
    }

    results = {}
    for kit_name, kit in kits.items():
        for case_name, runner in cases.items():
            runner(kit)  # warm-up (JIT compilation, cache effects)
            results[(kit_name, case_name)] = bench(
                lambda k=kit, r=runner: r(k), (), args.repeat)

    print(f"\nbest of {args.repeat} runs, n = {n}:")
    print(f"{'kernel':<16}{'numpy':>12}", end="")
    if HAVE_NUMBA:
        print(f"{'numba':>12}{'speedup':>10}")
    else:
        print()
    for case_name in cases:
        base = results[("numpy", case_name)]
        line = f"{case_name:<16}{base * 1e3:>10.2f}ms"
        if HAVE_NUMBA:
            fast = results[("numba", case_name)]
            line += f"{fast * 1e3:>10.2f}ms{base / fast:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
