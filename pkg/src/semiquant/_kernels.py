"""Compiled inner loops: the radial RK4 march and the Sturm count sweep.

These are the only O(grid)-per-call loops sitting inside energy bisections;
everything else in the package is vectorized or cheap. Both kernels are
deterministic and allocation-free.
"""

from __future__ import annotations

import numpy as np
from numba import njit

OVERFLOW_CAP = 1e250


@njit(cache=True)
def radial_march(g, h, u0, v0):
    """March u'' = g(rho) u with fixed-step RK4, counting sign changes of u.

    g holds 2*steps+1 samples on the half-step grid. Returns
    (u_end, nodes, stop) where stop < steps means |u| exceeded the overflow
    cap after step `stop` and the march bailed out there.
    """
    u = u0
    v = v0
    nodes = 0
    half = 0.5 * h
    sixth = h / 6.0
    steps = (g.shape[0] - 1) // 2
    stop = steps
    for i in range(steps):
        g0 = g[2 * i]
        g1 = g[2 * i + 1]
        g2 = g[2 * i + 2]
        k1u = v
        k1v = g0 * u
        k2u = v + half * k1v
        k2v = g1 * (u + half * k1u)
        k3u = v + half * k2v
        k3v = g1 * (u + half * k2u)
        k4u = v + h * k3v
        k4v = g2 * (u + h * k3u)
        un = u + sixth * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if un * u < 0.0:
            nodes += 1
        u = un
        if abs(u) > OVERFLOW_CAP or abs(v) > OVERFLOW_CAP:
            stop = i + 1
            break
    return u, nodes, stop


@njit(cache=True)
def radial_march_record(g, h, u0, v0, out):
    """radial_march that also records u at every full step into out (steps+1)."""
    u = u0
    v = v0
    nodes = 0
    half = 0.5 * h
    sixth = h / 6.0
    steps = (g.shape[0] - 1) // 2
    stop = steps
    out[0] = u
    for i in range(steps):
        g0 = g[2 * i]
        g1 = g[2 * i + 1]
        g2 = g[2 * i + 2]
        k1u = v
        k1v = g0 * u
        k2u = v + half * k1v
        k2v = g1 * (u + half * k1u)
        k3u = v + half * k2v
        k3v = g1 * (u + half * k2u)
        k4u = v + h * k3v
        k4v = g2 * (u + h * k3u)
        un = u + sixth * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if un * u < 0.0:
            nodes += 1
        u = un
        out[i + 1] = u
        if abs(u) > OVERFLOW_CAP or abs(v) > OVERFLOW_CAP:
            stop = i + 1
            break
    for j in range(stop + 1, steps + 1):
        out[j] = np.nan
    return u, nodes, stop


@njit(cache=True)
def sturm_count(diag, offdiag_sq, x):
    """Number of eigenvalues of the symmetric tridiagonal matrix below x.

    Zero pivots are nudged to -tiny (the LAPACK convention), which both counts
    the exact hit and keeps the recurrence finite.
    """
    count = 0
    q = diag[0] - x
    if q == 0.0:
        q = -1e-300
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - offdiag_sq[i - 1] / q
        if q == 0.0:
            q = -1e-300
        if q < 0.0:
            count += 1
    return count
