"""Standard-map resonance machinery.

Closed form for the 3x3 window determinant, the nested singular
integrals controlling its inverse fractional moments, root localization
for the phase function h(x) = lam*cos(x) + 2x modulo 2*pi, and the
resonant/regular classification of couplings (lam near a multiple of
2*pi, up to a finite offset set, signals an elliptic island and the
blow-up of the integrals).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dynamics import reduce_angle
from .operators import ComplexEnergy
from .quad import QuadResult, integrate_adaptive

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Det3Inputs:
    x0: float
    x1: float
    z: complex
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be > 0")


@dataclass(frozen=True)
class LambdaClass:
    lam: float
    lambda_bar: float
    delta_exp: float
    resonant: bool


def det3(x0, x1, z, lam, hopping=True):
    """det(H_3 - z) for the standard-map window {x_-1, x0, x1}.

    c_k = cos x_k + z with x_-1 = 2 x0 + lam sin x0 - x1; the closed
    form is -[c_-1 (c0 c1 - lam^-2) - lam^-2 c1].  hopping=False drops
    the lam^-2 terms (the lam -> inf factorization -c_-1 c0 c1).
    """
    zz = z.z if isinstance(z, ComplexEnergy) else complex(z)
    c1 = math.cos(x1) + zz
    c0 = math.cos(x0) + zz
    cm1 = math.cos(2.0 * x0 + lam * math.sin(x0) - x1) + zz
    if not hopping:
        return -(cm1 * c0 * c1)
    inv2 = 1.0 / (lam * lam)
    return -(cm1 * (c0 * c1 - inv2) - inv2 * c1)


def kick_phase(x0, lam):
    """theta(x0) = 2 x0 + lam sin x0, reduced to [-pi, pi)."""
    return reduce_angle(2.0 * x0 + lam * math.sin(x0))


def circle_dist(u, b):
    """Geodesic distance on R/2piZ, in [0, pi]; vectorized."""
    d = np.mod(np.asarray(u, dtype=float) - b + math.pi, TWO_PI) - math.pi
    return np.abs(d)


# -- root localization ----------------------------------------------------

def _mod2pi_roots(f, crit, lo, hi, b, rtol=1e-13):
    """All x in [lo, hi] with f(x) = b (mod 2 pi), f piecewise monotone.

    crit lists the interior zeros of f'; bisection runs on each monotone
    branch for every reachable 2*pi translate of b.
    """
    pts = sorted({lo, hi, *[c for c in crit if lo < c < hi]})
    roots = []
    for u, w in zip(pts[:-1], pts[1:]):
        fu, fw = f(u), f(w)
        flo, fhi = min(fu, fw), max(fu, fw)
        k0 = math.ceil((flo - b) / TWO_PI)
        k1 = math.floor((fhi - b) / TWO_PI)
        for k in range(k0, k1 + 1):
            target = b + TWO_PI * k
            if fu == target:
                roots.append(u)
            elif fw == target:
                roots.append(w)
            else:
                roots.append(brentq(lambda x: f(x) - target, u, w,
                                    xtol=1e-15, rtol=rtol))
    roots = sorted(roots)
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-12:
            out.append(r)
    return out


def phase_roots(lam, b, lo=-math.pi / 2, hi=math.pi / 2):
    """Roots of h(x) = lam cos x + 2x = b (mod 2 pi) on [lo, hi].

    Found by splitting at the zeros of h' = -lam sin x + 2 (monotone
    branches) and bisecting each branch; residuals are below 1e-10.
    """
    if lam <= 0:
        raise ValueError("lam must be > 0")

    def h(x):
        return lam * math.cos(x) + 2.0 * x

    crit = []
    if lam > 2.0:
        xc = math.asin(2.0 / lam)
        k0 = math.floor((lo - xc) / TWO_PI) - 1
        k1 = math.ceil((hi - xc) / TWO_PI) + 1
        for k in range(k0, k1 + 1):
            for c in (xc + TWO_PI * k, math.pi - xc + TWO_PI * k):
                if lo < c < hi:
                    crit.append(c)
    return _mod2pi_roots(h, crit, lo, hi, b)


def kick_phase_roots(lam, b, lo=-math.pi, hi=math.pi):
    """Roots of theta(x) = 2x + lam sin x = b (mod 2 pi) on [lo, hi]."""
    if lam <= 0:
        raise ValueError("lam must be > 0")

    def theta(x):
        return 2.0 * x + lam * math.sin(x)

    crit = []
    if lam > 2.0:
        xc = math.acos(-2.0 / lam)   # theta' = 2 + lam cos x
        k0 = math.floor((lo + xc) / TWO_PI) - 1
        k1 = math.ceil((hi + xc) / TWO_PI) + 1
        for k in range(k0, k1 + 1):
            for c in (xc + TWO_PI * k, -xc + TWO_PI * k):
                if lo < c < hi:
                    crit.append(c)
    return _mod2pi_roots(theta, crit, lo, hi, b)


# -- the integrals --------------------------------------------------------

def _pair_zero_structure(E, theta, eps, grid=2048):
    """(zeros, has_double) of the degree-2 trig polynomial

    g(x) = (cos x + E)(cos(x - theta) + E) - eps*((cos x + E) + (cos(x - theta) + E))
    on [-pi, pi].  Sign changes give simple zeros; |g| minima at
    numerical zero without a sign change are (near-)double zeros.
    """
    def g(x):
        a = np.cos(x) + E
        c = np.cos(x - theta) + E
        return a * c - eps * (a + c)

    xs = np.linspace(-math.pi, math.pi, grid + 1)
    ys = g(xs)
    scale = float(np.max(np.abs(ys))) or 1.0
    zeros = []
    sign_change = np.nonzero(np.sign(ys[:-1]) * np.sign(ys[1:]) < 0)[0]
    for i in sign_change:
        zeros.append(brentq(lambda x: float(g(np.array([x]))[0]),
                            xs[i], xs[i + 1], xtol=1e-15))
    has_double = False
    ay = np.abs(ys)
    for i in range(1, grid):
        if ay[i] <= ay[i - 1] and ay[i] <= ay[i + 1]:
            if ay[i] < 1e-9 * scale:
                near_simple = any(abs(xs[i] - r) < 4.0 * math.pi / grid
                                  for r in zeros)
                if not near_simple:
                    zeros.append(float(xs[i]))
                    has_double = True
    return sorted(zeros), has_double


def inner_resonance_integral(E, theta, moment_alpha, eps, tol=1e-5,
                             max_subdiv=800, pre_refine=30):
    """Integral over [-pi, pi] of |g|^(-alpha) with g the paired-cosine
    polynomial above; splits at the located zeros of g.

    Finite for separated simple zeros and alpha < 1; a double zero with
    alpha >= 1/2 is non-integrable and the result comes back with
    converged=False (value is then a lower bound).
    """
    alpha = float(moment_alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("moment_alpha must be in (0, 1)")
    zeros, has_double = _pair_zero_structure(E, theta, eps)

    def integrand(x):
        a = np.cos(x) + E
        c = np.cos(x - theta) + E
        g = a * c - eps * (a + c)
        with np.errstate(divide="ignore"):
            return np.abs(g) ** (-alpha)

    budget = max_subdiv if not (has_double and alpha >= 0.5) else \
        min(max_subdiv, 200)
    res = integrate_adaptive(integrand, -math.pi, math.pi,
                             split_points=zeros, tol=tol,
                             max_subdiv=budget, pre_refine=pre_refine)
    if has_double and alpha >= 0.5:
        res.converged = False
    return res


def phase_proximity_integral(lam, b, E, moment_alpha, tol=2e-3,
                             max_subdiv=3000, pre_refine=35):
    """Integral over the circle of |sin x + E|^(-alpha) *
    dist(hbar(x), b)^(-(2 alpha - 1)), hbar = lam cos x + 2x mod 2 pi.

    Splits at the zeros of sin x + E, the roots of hbar = b (the
    singularities), and the roots of hbar = b + pi (kinks of the
    circle distance).  Diverges -- flagged via converged=False -- when
    a root of hbar = b collides with a zero of sin x + E, which at
    b = 0, E = 0 happens exactly for resonant lam (lambda_bar near 0)
    and alpha > 2/3.
    """
    alpha = float(moment_alpha)
    if not 0.5 < alpha < 1.0:
        raise ValueError("moment_alpha must be in (1/2, 1)")
    if not abs(E) < 1.0:
        raise ValueError("need |E| < 1")
    lo, hi = -math.pi / 2, 3.0 * math.pi / 2
    splits = []
    s = math.asin(-E)              # zeros of sin x + E
    for zx in (s, math.pi - s):
        if lo < zx < hi:
            splits.append(zx)
    splits += phase_roots(lam, b, lo, hi)
    splits += phase_roots(lam, reduce_angle(b + math.pi), lo, hi)

    def integrand(x):
        h = lam * np.cos(x) + 2.0 * x
        d = circle_dist(h, b)
        with np.errstate(divide="ignore"):
            return (np.abs(np.sin(x) + E) ** (-alpha)
                    * d ** (-(2.0 * alpha - 1.0)))

    return integrate_adaptive(integrand, lo, hi, split_points=splits,
                              tol=tol, max_subdiv=max_subdiv,
                              pre_refine=pre_refine)


def excluded_center_intervals(lam, E, a_cut):
    """Intervals of x0 in [-pi, pi] where |cos x0 + E| < a_cut/lam^2."""
    c = a_cut / (lam * lam)
    if abs(E) >= 1.0:
        raise ValueError("need |E| < 1")
    lo_ex = math.acos(min(1.0, -E + c))
    hi_ex = math.acos(max(-1.0, -E - c))
    out = []
    if hi_ex > lo_ex:
        out.append((lo_ex, hi_ex))
        out.append((-hi_ex, -lo_ex))
    return out


def det3_moment_integral(lam, E, a_cut, moment_alpha, inner_tol=1e-3,
                         tol_rel=2e-2, max_subdiv=120):
    """Nested integral of |det3|^(-alpha) over the region where the
    center cosine stays a_cut/lam^2 away from zero.

    Outer quadrature over x0 of |cos x0 + E|^(-alpha) times the inner
    paired-cosine integral at theta(x0) with eps = 1/(lam^2 (cos x0+E)).
    Inner non-convergence propagates to the result flag.
    """
    alpha = float(moment_alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("moment_alpha must be in (0, 1)")
    excluded = excluded_center_intervals(lam, E, a_cut)
    pieces = []
    prev = -math.pi
    for lo_ex, hi_ex in sorted(excluded):
        if lo_ex > prev:
            pieces.append((prev, lo_ex))
        prev = hi_ex
    if prev < math.pi:
        pieces.append((prev, math.pi))

    # resonance spikes of the inner integral: theta(x0) near 0 or +-2x*
    xstar = math.acos(-E)
    spike_targets = [0.0, reduce_angle(2 * xstar), reduce_angle(-2 * xstar)]
    inner_failed = [False]

    def outer_scalar(x0):
        c0 = math.cos(x0) + E
        inner = inner_resonance_integral(
            E, kick_phase(x0, lam), alpha, 1.0 / (lam * lam * c0),
            tol=inner_tol, max_subdiv=250, pre_refine=22)
        if not inner.converged:
            inner_failed[0] = True
        return abs(c0) ** (-alpha) * inner.value

    def outer(xs):
        return np.array([outer_scalar(float(x)) for x in np.atleast_1d(xs)])

    total = 0.0
    err = 0.0
    nsub = 0
    converged = True
    for lo, hi in pieces:
        splits = [r for c in spike_targets
                  for r in kick_phase_roots(lam, c, lo, hi)]
        res = integrate_adaptive(outer, lo, hi, split_points=splits,
                                 tol=tol_rel, max_subdiv=max_subdiv,
                                 pre_refine=5)
        total += res.value
        err += res.err_est
        nsub += res.subdivisions
        converged = converged and res.converged
    converged = converged and not inner_failed[0] \
        and err <= tol_rel * max(1.0, abs(total))
    return QuadResult(value=total, err_est=err, converged=converged,
                      subdivisions=nsub)


def classify_coupling(lam, delta_exp=0.1, offsets=(0.0, math.pi)):
    """Resonant iff lam is within lam^(-delta_exp) of a 2*pi multiple
    shifted by one of the offsets (default {0, pi}, valid for energy 0)."""
    if lam < TWO_PI:
        raise ValueError("need lam >= 2*pi")
    if delta_exp <= 0:
        raise ValueError("delta_exp must be > 0")
    lam_bar = reduce_angle(lam)
    threshold = lam ** (-delta_exp)
    dist_min = min(abs(reduce_angle(lam - o)) for o in offsets)
    return LambdaClass(lam=lam, lambda_bar=lam_bar, delta_exp=delta_exp,
                       resonant=bool(dist_min < threshold))
