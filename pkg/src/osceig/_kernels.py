"""Hot numerical kernels with an optional numba path.

The three sequential loops that dominate runtime live here: the Sturm
inertia count for the tridiagonal pencil, a pivoting tridiagonal solve for
inverse iteration, and the adaptive Cash-Karp integrator for the Pruefer
angle ODE. Everything else in the package is vectorised numpy.

Set OSCEIG_NO_NUMBA=1 to force the pure-Python fallback (same source,
no @njit). ``benchmarks/bench_kernels.py`` times both paths.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_FLAG = "OSCEIG_NO_NUMBA"


def _numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


def _identity(func):
    return func


def build_kernels(jit):
    """Construct the kernel set under a given decorator (njit or identity)."""

    @jit
    def sturm_count(kd, ko, md, mo, lam):
        # Number of eigenvalues of the pencil (K, M) strictly below lam,
        # via the inertia of the LDL^T pivots of K - lam*M.
        n = kd.shape[0]
        count = 0
        d = kd[0] - lam * md[0]
        if d < 0.0:
            count += 1
        for i in range(1, n):
            e = ko[i - 1] - lam * mo[i - 1]
            if d == 0.0:
                d = 1e-300
            d = (kd[i] - lam * md[i]) - e * e / d
            if d < 0.0:
                count += 1
        return count

    @jit
    def tridiag_solve(dl, dm, du, b):
        # Tridiagonal solve with partial pivoting (dgtsv-style); dl/du are
        # the sub/super diagonals of length n-1. Returns the solution.
        n = dm.shape[0]
        d = dm.copy()
        u1 = np.zeros(n, dtype=np.float64)
        u2 = np.zeros(n, dtype=np.float64)
        for i in range(n - 1):
            u1[i] = du[i]
        x = b.copy()
        for i in range(n - 1):
            sub = dl[i]
            if abs(d[i]) >= abs(sub):
                if d[i] == 0.0:
                    d[i] = 1e-300
                fact = sub / d[i]
                d[i + 1] -= fact * u1[i]
                x[i + 1] -= fact * x[i]
            else:
                fact = d[i] / sub
                d[i] = sub
                temp = d[i + 1]
                d[i + 1] = u1[i] - fact * temp
                if i < n - 2:
                    u2[i] = u1[i + 1]
                    u1[i + 1] = -fact * u2[i]
                u1[i] = temp
                temp = x[i]
                x[i] = x[i + 1]
                x[i + 1] = temp - fact * x[i + 1]
        if d[n - 1] == 0.0:
            d[n - 1] = 1e-300
        x[n - 1] = x[n - 1] / d[n - 1]
        if n > 1:
            x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i]
        return x

    @jit
    def _polyval_desc(coeffs, t):
        v = 0.0
        for j in range(coeffs.shape[0]):
            v = v * t + coeffs[j]
        return v

    @jit
    def _prufer_rhs(r, theta, seg_left, mp_row, c_row, d, s, lam, r_floor):
        t = r - seg_left
        a = 2.0 * s * _polyval_desc(mp_row, t)
        if d > 1.0:
            rr = r
            if rr < r_floor:
                rr = r_floor
            a += (d - 1.0) / rr
        b = lam - _polyval_desc(c_row, t)
        st = math.sin(theta)
        ct = math.cos(theta)
        return ct * ct + a * st * ct + b * st * st

    @jit
    def prufer_theta(edges, mp_coeffs, c_coeffs, d, s, lam, theta0, rtol, atol,
                     r_start, r_floor):
        # Cash-Karp 4(5) with step caps at coefficient segment edges. The
        # angle ODE uses only s*m'(r), so no exponential weight appears.
        theta = theta0
        nseg = edges.shape[0] - 1
        for i in range(nseg):
            a = edges[i]
            b = edges[i + 1]
            if b <= r_start:
                continue
            if a < r_start:
                a = r_start
            seg_left = edges[i]
            mp_row = mp_coeffs[i]
            c_row = c_coeffs[i]
            r = a
            h = b - a
            while r < b - 1e-300:
                if h > b - r:
                    h = b - r
                k1 = _prufer_rhs(r, theta, seg_left, mp_row, c_row, d, s, lam, r_floor)
                k2 = _prufer_rhs(r + 0.2 * h, theta + h * 0.2 * k1,
                                 seg_left, mp_row, c_row, d, s, lam, r_floor)
                k3 = _prufer_rhs(r + 0.3 * h,
                                 theta + h * (0.075 * k1 + 0.225 * k2),
                                 seg_left, mp_row, c_row, d, s, lam, r_floor)
                k4 = _prufer_rhs(r + 0.6 * h,
                                 theta + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3),
                                 seg_left, mp_row, c_row, d, s, lam, r_floor)
                k5 = _prufer_rhs(r + h,
                                 theta + h * (-11.0 / 54.0 * k1 + 2.5 * k2
                                              - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4),
                                 seg_left, mp_row, c_row, d, s, lam, r_floor)
                k6 = _prufer_rhs(r + 0.875 * h,
                                 theta + h * (1631.0 / 55296.0 * k1
                                              + 175.0 / 512.0 * k2
                                              + 575.0 / 13824.0 * k3
                                              + 44275.0 / 110592.0 * k4
                                              + 253.0 / 4096.0 * k5),
                                 seg_left, mp_row, c_row, d, s, lam, r_floor)
                inc5 = (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3
                        + 125.0 / 594.0 * k4 + 512.0 / 1771.0 * k6)
                inc4 = (2825.0 / 27648.0 * k1 + 18575.0 / 48384.0 * k3
                        + 13525.0 / 55296.0 * k4 + 277.0 / 14336.0 * k5
                        + 0.25 * k6)
                err = abs(h * (inc5 - inc4))
                tol = atol + rtol * abs(theta)
                if err <= tol or h <= 1e-14 * (b - a):
                    r += h
                    theta += h * inc5
                    if err > 0.0:
                        fac = 0.9 * (tol / err) ** 0.2
                        if fac > 5.0:
                            fac = 5.0
                        h *= fac
                    else:
                        h *= 5.0
                else:
                    fac = 0.9 * (tol / err) ** 0.25
                    if fac < 0.1:
                        fac = 0.1
                    h *= fac
        return theta

    return sturm_count, tridiag_solve, prufer_theta


if _numba_disabled():
    USING_NUMBA = False
    _jit = _identity
else:
    try:
        from numba import njit

        _jit = njit(cache=True)
        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is an optional extra
        _jit = _identity
        USING_NUMBA = False

sturm_count, tridiag_solve, prufer_theta = build_kernels(_jit)
