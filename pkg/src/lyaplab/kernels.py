"""Numba kernels for the tight inner loops.

Everything here mirrors, step for step, the reference implementations in
`dynamics`, `lyapunov` and `operators`; the pure-Python versions stay the
documented contract and the kernels are tested against them bit for bit
on short runs.
"""

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi
PI = math.pi


@njit(cache=True)
def _reduce(x):
    y = x - TWO_PI * np.rint(x / TWO_PI)
    if y >= PI:
        y -= TWO_PI
    elif y < -PI:
        y += TWO_PI
    return y


@njit(cache=True)
def stdmap_orbit_values(x_prev, x_curr, lam, n):
    """Angles x_0, ..., x_{n-1} along the standard-map orbit."""
    out = np.empty(n)
    for k in range(n):
        out[k] = x_curr
        x_next = _reduce(2.0 * x_curr + lam * math.sin(x_curr) - x_prev)
        x_prev = x_curr
        x_curr = x_next
    return out


@njit(cache=True)
def skewshift_potential(coords, alpha, n):
    """V(k) = cos(w_d) along the skew-shift orbit, k = 0..n-1."""
    d = coords.shape[0]
    w = coords.copy()
    out = np.empty(n)
    for k in range(n):
        out[k] = math.cos(w[d - 1])
        w0 = _reduce(w[0] + alpha)
        for j in range(d - 1, 0, -1):
            w[j] = _reduce(w[j] + w[j - 1])
        w[0] = w0
    return out


@njit(cache=True)
def transfer_run(v, E, lam):
    """Cocycle of [[lam*(E-v), -1], [1, 0]] over the potential array ``v``.

    The column is renormalized to unit length after every step; the log
    of the rescaling factors is accumulated (batched into one log call
    per ~overflow window, which only reorders floating-point additions).
    Returns (p, q, log_norm).
    """
    p, q = 1.0, 0.0
    log_norm = 0.0
    s = 1.0
    for k in range(v.shape[0]):
        a = lam * (E - v[k])
        pn = a * p - q
        qn = p
        nr = math.sqrt(pn * pn + qn * qn)
        p = pn / nr
        q = qn / nr
        s *= nr
        if s > 1e280 or s < 1e-280:
            log_norm += math.log(s)
            s = 1.0
    log_norm += math.log(s)
    return p, q, log_norm


@njit(cache=True)
def stdmap_transfer(x_prev, x_curr, lam, E, n):
    """Fused orbit + cocycle run for the standard map (V = -cos x_n).

    Returns the accumulated log norm after n renormalized steps.
    """
    p, q = 1.0, 0.0
    log_norm = 0.0
    s = 1.0
    for _ in range(n):
        a = lam * (E + math.cos(x_curr))
        pn = a * p - q
        qn = p
        nr = math.sqrt(pn * pn + qn * qn)
        p = pn / nr
        q = qn / nr
        s *= nr
        if s > 1e280 or s < 1e-280:
            log_norm += math.log(s)
            s = 1.0
        x_next = _reduce(2.0 * x_curr + lam * math.sin(x_curr) - x_prev)
        x_prev = x_curr
        x_curr = x_next
    log_norm += math.log(s)
    return log_norm


@njit(cache=True)
def sturm_counts(v, inv_lam, edges):
    """#{eigenvalues < E} of tridiag(1/lam, v, 1/lam), for each edge E.

    Sign count of the LDL^T pivots of H - E.  An exactly zero pivot is
    replaced by a tiny negative number (measure-zero event; the public
    scalar wrapper implements the documented perturb-and-recount rule).
    """
    n = v.shape[0]
    t2 = inv_lam * inv_lam
    m = edges.shape[0]
    out = np.empty(m, np.int64)
    for j in range(m):
        E = edges[j]
        count = 0
        d = v[0] - E
        if d == 0.0:
            d = -1e-300
        if d < 0.0:
            count += 1
        for k in range(1, n):
            d = (v[k] - E) - t2 / d
            if d == 0.0:
                d = -1e-300
            if d < 0.0:
                count += 1
        out[j] = count
    return out
