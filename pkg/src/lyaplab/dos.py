"""Density-of-states estimation and fractional-moment window bounds.

The DOS is estimated by eigenvalue counting on plain (Dirichlet)
truncations of length N, averaged over an ensemble of windows; its
Stieltjes transform uses the exact per-bin antiderivative.  Window mass
rho(E0 - delta, E0 + delta) is bounded by (2*delta)^a times the a-th
absolute moment of the Green function at the window center.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .operators import (ComplexEnergy, NumericalFailure, green_entry,
                        sample_potential, sturm_counts_array)


@dataclass(frozen=True)
class SpectralHistogram:
    """Binned, normalized DOS estimate."""
    edges: np.ndarray
    mass: np.ndarray
    coverage_warning: bool = False

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        mass = np.asarray(self.mass, dtype=float)
        if len(edges) != len(mass) + 1:
            raise ValueError("need len(edges) == len(mass) + 1")
        if np.any(np.diff(edges) < 0):
            raise ValueError("edges must be nondecreasing")
        if np.any(mass < 0):
            raise ValueError("masses must be >= 0")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "mass", mass)

    @property
    def total(self):
        return float(np.sum(self.mass))

    def window_mass(self, e0, delta):
        """Mass of (e0 - delta, e0 + delta), bins pro-rated by overlap."""
        lo, hi = e0 - delta, e0 + delta
        a, b = self.edges[:-1], self.edges[1:]
        width = b - a
        overlap = np.clip(np.minimum(b, hi) - np.maximum(a, lo), 0.0, None)
        frac = np.where(width > 0, overlap / np.where(width > 0, width, 1.0),
                        ((a >= lo) & (a <= hi)).astype(float))
        return float(np.sum(self.mass * frac))


@dataclass(frozen=True)
class WindowBound:
    """(2*delta)^a * mean |G(0,0)|^a over the driving measure."""
    e0: float
    delta: float
    moment_alpha: float
    bound: float
    samples: int
    bound_stderr: float = 0.0

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be >= 0")


def dos_histogram(spec, N, B, edges, seed):
    """Empirical DOS from B truncations of length N.

    Per-bin mass is the ensemble mean of the eigenvalue count between
    consecutive edges divided by N, renormalized to total mass one.  A
    coverage warning is flagged when the edges fail to cover the a
    priori spectral range [min V - 2/lam, max V + 2/lam].
    """
    if N < 2 or B < 1:
        raise ValueError("need N >= 2 and B >= 1")
    edges = np.asarray(edges, dtype=float)
    if len(edges) < 2:
        raise ValueError("need at least two edges")
    lo, hi = spec.potential_range()
    covers = (edges[0] <= lo - 2.0 / spec.lam + 1e-12
              and edges[-1] >= hi + 2.0 / spec.lam - 1e-12)
    mass = np.zeros(len(edges) - 1)
    for k in range(B):
        member_seed = rng.derive_seed(seed, rng.DOS, k)
        w = sample_potential(spec, 0, N - 1, member_seed)
        counts = sturm_counts_array(w, edges)
        mass += np.diff(counts) / N
    mass /= B
    total = float(np.sum(mass))
    warning = not covers or total < 1.0 - 1e-9
    if total > 0:
        mass = mass / total
    return SpectralHistogram(edges=edges, mass=mass, coverage_warning=warning)


def window_mass_samples(spec, e0, delta, N, B, seed):
    """Per-member empirical mass of (e0 +- delta): (mean, stderr).

    Shares the DOS member streams so it is consistent with
    dos_histogram at matched (spec, N, B, seed).
    """
    edges = np.array([e0 - delta, e0 + delta])
    vals = np.empty(B)
    for k in range(B):
        member_seed = rng.derive_seed(seed, rng.DOS, k)
        w = sample_potential(spec, 0, N - 1, member_seed)
        counts = sturm_counts_array(w, edges)
        vals[k] = (counts[1] - counts[0]) / N
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(B)) if B > 1 else 0.0
    return mean, stderr


def stieltjes(h, z):
    """Stieltjes transform of the histogram: sum over bins of
    mass * average of 1/(E' - z), using the exact log antiderivative.
    """
    zz = z.z if isinstance(z, ComplexEnergy) else complex(z)
    if zz.imag <= 0:
        raise ValueError("stieltjes needs Im z > 0")
    a, b = h.edges[:-1], h.edges[1:]
    width = b - a
    out = 0.0 + 0.0j
    for ak, bk, wk, mk in zip(a, b, width, h.mass):
        if mk == 0.0:
            continue
        if wk == 0.0:  # atom
            out += mk / (ak - zz)
        else:
            out += mk * (cmath.log(bk - zz) - cmath.log(ak - zz)) / wk
    return out


def green_samples(spec, z, window_half, B, seed, moment_alpha=1.0):
    """Per-member center Green entries and |G|^a samples.

    Windows of length 2*window_half + 1 centered at 0; truncation error
    is ~ exp(-2*gamma*window_half)/delta, so choose window_half with
    gamma*window_half >> ln(1/delta).  Returns (G_array, abs_alpha_array).
    """
    zz = z.z if isinstance(z, ComplexEnergy) else complex(z)
    if zz.imag <= 0:
        raise ValueError("green_samples needs Im z > 0")
    if not 0.0 < moment_alpha <= 1.0:
        raise ValueError("moment_alpha must be in (0, 1]")
    m = 2 * window_half + 1
    gs = np.empty(B, dtype=complex)
    clamp = 1.01 / zz.imag
    violations = 0
    for k in range(B):
        member_seed = rng.derive_seed(seed, rng.GREEN, k)
        w = sample_potential(spec, -window_half, window_half, member_seed)
        g = green_entry(w, zz, window_half, window_half)
        if abs(g) > clamp:
            violations += 1
        gs[k] = g
    if violations:
        raise NumericalFailure(
            f"{violations} Green samples exceeded the resolvent bound "
            f"1/delta by more than 1%")
    return gs, np.abs(gs) ** moment_alpha


def green_avg(spec, z, window_half, B, seed, moment_alpha=1.0):
    """(mean G(0,0), mean |G(0,0)|^a) over B sampled windows."""
    gs, abs_a = green_samples(spec, z, window_half, B, seed, moment_alpha)
    return complex(np.mean(gs)), float(np.mean(abs_a))


def frac_moment_bound(spec, e0, delta, moment_alpha, window_half, B, seed):
    """Fractional-moment upper bound on the DOS mass of (e0 +- delta)."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    z = complex(e0, delta)
    _, abs_a = green_samples(spec, z, window_half, B, seed, moment_alpha)
    mean = float(np.mean(abs_a))
    stderr = (float(np.std(abs_a, ddof=1) / math.sqrt(B)) if B > 1 else 0.0)
    factor = (2.0 * delta) ** moment_alpha
    return WindowBound(e0=e0, delta=delta, moment_alpha=moment_alpha,
                       bound=factor * mean, samples=B,
                       bound_stderr=factor * stderr)


def empirical_g(h, e0, xi, delta):
    """max(delta, sup over |E - e0| <= xi of mass(E +- delta)).

    Direct transcription of the exceptional-set parameter g at histogram
    granularity: the sweep is discretized at bin resolution.
    """
    centers = 0.5 * (h.edges[:-1] + h.edges[1:])
    sweep = [e0] + list(centers[np.abs(centers - e0) <= xi])
    sup = max(h.window_mass(c, delta) for c in sweep)
    return max(delta, sup)
