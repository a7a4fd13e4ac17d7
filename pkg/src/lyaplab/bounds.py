"""Explicit bounds: the exceptional-energy-set measure estimate, the
determinant-difference moment bound, and the bounded-density integral
inequalities behind it, each checkable by closed form, quadrature, or
Monte Carlo.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .quad import integrate_adaptive


@dataclass(frozen=True)
class LowGammaBoundInputs:
    """Parameters of the exceptional-set estimate.

    g is the DOS window-mass scale max(delta, sup mass(E +- delta));
    the bound controls the measure of energies within delta of the
    center whose Lyapunov exponent is at most t.
    """
    ln_lambda: float
    t: float
    xi: float
    delta: float
    g: float

    def __post_init__(self):
        if not 0.0 < self.delta < self.xi <= 1.0:
            raise ValueError("need 0 < delta < xi <= 1")
        if self.g < self.delta:
            raise ValueError("need g >= delta")


@dataclass(frozen=True)
class BoundReport:
    inputs: LowGammaBoundInputs
    raw_bound: float
    clamped_bound: float
    vacuous: bool


def low_gamma_measure_bound(p):
    """2e * exp(-(ln lam - t - 6 xi ln(e^2 g / (xi delta))) / (2 g)),
    clamped by the trivial window bound 2*delta.

    The raw value can exceed the window size for bad parameters; the
    vacuous flag marks that regime so reports never show meaningless
    values.
    """
    log_term = math.log(math.e ** 2 * p.g / (p.xi * p.delta))
    numerator = p.ln_lambda - p.t - 6.0 * p.xi * log_term
    exponent = -numerator / (2.0 * p.g)
    # exp() can overflow for very negative numerators; cap at inf
    raw = 2.0 * math.e * (math.exp(exponent) if exponent < 700 else math.inf)
    trivial = 2.0 * p.delta
    vacuous = raw >= trivial
    return BoundReport(inputs=p, raw_bound=raw,
                       clamped_bound=min(raw, trivial), vacuous=vacuous)


def measure_low_gamma(rows, t, e0, delta):
    """Grid measure of {|E - e0| <= delta : gamma(E) <= t}.

    rows are (E, gamma) pairs on a uniform grid of spacing h covering
    the window; the estimate h * #hits carries an O(h) bias.
    """
    rows = sorted(rows)
    if len(rows) < 2:
        raise ValueError("need at least two grid rows")
    es = np.array([r[0] for r in rows])
    spacings = np.diff(es)
    h = float(spacings[0])
    if h <= 0 or not np.allclose(spacings, h, rtol=1e-9, atol=1e-12):
        raise ValueError("rows must come from a uniform energy grid")
    if es[0] > e0 - delta + h or es[-1] < e0 + delta - h:
        raise ValueError("grid does not cover the window")
    hits = sum(1 for e, gamma in rows
               if abs(e - e0) <= delta and gamma <= t)
    return h * hits


def det_moment_rhs(A, delta, xi, m):
    """(3 A ln(1 + 1/(A delta)) + 2/xi)^m: the proved upper bound on the
    mean inverse determinant difference for m independent sites."""
    if A <= 0 or delta <= 0 or xi <= 0 or m < 1:
        raise ValueError("parameters must be positive, m >= 1")
    return (3.0 * A * math.log(1.0 + 1.0 / (A * delta)) + 2.0 / xi) ** m


def det_moment_mc(dist, m, z, lam, a, samples, seed):
    """Monte-Carlo mean of |D_m - a*D_{m-1}|^{-1} over iid potentials.

    dist is ("uniform", lo, hi); D_k follows the determinant recursion
    with the given z = E + i delta.  Fixed-order reduction over the
    sample axis.  Returns (estimate, stderr).
    """
    name, lo, hi = dist
    if name != "uniform":
        raise ValueError(f"unsupported distribution {name!r}")
    if m < 1 or samples < 2:
        raise ValueError("need m >= 1 and samples >= 2")
    zz = complex(z.e, z.delta) if hasattr(z, "e") else complex(z)
    g = rng.rng_for(seed, rng.MC_BOUNDS)
    v = g.uniform(lo, hi, size=(samples, m))
    inv_lam2 = 1.0 / (lam * lam)
    d_prev = np.ones(samples, dtype=complex)          # D_{k-1}
    d_prev2 = np.zeros(samples, dtype=complex)        # D_{k-2}
    for k in range(m):
        d = (v[:, k] - zz) * d_prev - (inv_lam2 * d_prev2 if k >= 1 else 0.0)
        d_prev2, d_prev = d_prev, d
    vals = 1.0 / np.abs(d_prev - complex(a) * d_prev2)
    est = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(samples))
    return est, stderr


def density_integral_check(A, delta, E, dist, tol=1e-9, split_mass=False,
                           xi=None):
    """lhs = integral of d tau(v) / sqrt((v-E)^2 + delta^2) by adaptive
    quadrature vs the closed-form rhs.  Returns (lhs, rhs).

    With split_mass=False, tau is the full distribution (density <= A
    required) and rhs = 3 A ln(1 + 1/(A delta)).  With split_mass=True,
    only the restriction to [E - xi, E + xi] must have density <= A and
    rhs gains the far-mass term 2/xi.
    """
    name, lo, hi = dist
    if name != "uniform":
        raise ValueError(f"unsupported distribution {name!r}")
    density = 1.0 / (hi - lo)

    def integrand(v):
        return density / np.sqrt((v - E) ** 2 + delta ** 2)

    splits = [E] if lo < E < hi else []
    res = integrate_adaptive(integrand, lo, hi, split_points=splits, tol=tol)
    if not res.converged:
        raise RuntimeError(f"quadrature failed: err={res.err_est:.3g}")
    rhs = 3.0 * A * math.log(1.0 + 1.0 / (A * delta))
    if split_mass:
        if xi is None or xi <= 0:
            raise ValueError("split_mass requires xi > 0")
        rhs += 2.0 / xi
    return res.value, rhs
