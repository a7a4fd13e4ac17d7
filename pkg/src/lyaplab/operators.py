"""Finite restrictions of the Schrodinger operator

    (H psi)(n) = (1/lam) * (psi(n-1) + psi(n+1)) + V(n) psi(n)

driven by the standard map (V = -cos x_n), the skew shift, iid draws, or
deterministic potentials.  Provides determinant recursions, Green
function entries of truncations, and eigenvalue counting.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from . import kernels, rng
from .dynamics import reduce_angle


class ConfigurationError(ValueError):
    """Invalid model description (bad distribution support, etc.)."""


class NumericalFailure(RuntimeError):
    """A numerical sanity check failed (singular solve, clamp violation)."""


@dataclass(frozen=True)
class ComplexEnergy:
    """Spectral parameter z = E + i*delta with delta >= 0."""
    e: float
    delta: float = 0.0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be >= 0")

    @property
    def z(self):
        return complex(self.e, self.delta)


@dataclass(frozen=True)
class PotentialWindow:
    """Sampled potential V(n0), ..., V(n1) at coupling lam."""
    offset: int
    values: np.ndarray
    lam: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.size == 0:
            raise ValueError("window must be non-empty")
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential values must be finite")
        if self.lam <= 0:
            raise ValueError("lam must be > 0")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class OperatorSpec:
    """Potential driver plus coupling constant.

    kind: "stdmap" | "skewshift" | "iid" | "constant" | "periodic".
    For stdmap/skewshift the initial condition is drawn uniformly from
    the torus unless ``init`` pins it.
    """
    kind: str
    lam: float
    v: float = 0.0                               # constant
    values: tuple = ()                           # periodic
    dist: tuple = ("uniform", 0.0, 1.0)          # iid
    dim: int = 2                                 # skewshift
    rotation_alpha: float = math.sqrt(2.0)       # skewshift frequency
    h: str = "cos"                               # skewshift sampling fn
    init: tuple | None = None                    # pinned initial condition

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigurationError("lam must be > 0")
        if self.kind not in ("stdmap", "skewshift", "iid", "constant",
                             "periodic"):
            raise ConfigurationError(f"unknown driver kind {self.kind!r}")
        if self.kind == "iid":
            name, a, b = self.dist
            if name != "uniform":
                raise ConfigurationError(f"unknown distribution {name!r}")
            if not (b > a):
                raise ConfigurationError("empty distribution support")
        if self.kind == "periodic" and len(self.values) == 0:
            raise ConfigurationError("periodic driver needs values")
        if self.kind == "skewshift":
            if self.dim < 1:
                raise ConfigurationError("skewshift needs dim >= 1")
            if self.h != "cos":
                raise ConfigurationError(f"unknown h descriptor {self.h!r}")

    # Convenience constructors -------------------------------------------
    @staticmethod
    def stdmap(lam, init=None):
        return OperatorSpec("stdmap", lam, init=init)

    @staticmethod
    def skewshift(lam, dim=2, rotation_alpha=math.sqrt(2.0), init=None):
        return OperatorSpec("skewshift", lam, dim=dim,
                            rotation_alpha=rotation_alpha, init=init)

    @staticmethod
    def iid_uniform(lam, a=0.0, b=1.0):
        return OperatorSpec("iid", lam, dist=("uniform", float(a), float(b)))

    @staticmethod
    def constant(lam, v):
        return OperatorSpec("constant", lam, v=float(v))

    @staticmethod
    def periodic(lam, values):
        return OperatorSpec("periodic", lam, values=tuple(values))

    def potential_range(self):
        """(min f, max f) of the sampling function."""
        if self.kind in ("stdmap", "skewshift"):
            return (-1.0, 1.0)
        if self.kind == "iid":
            return (self.dist[1], self.dist[2])
        if self.kind == "constant":
            return (self.v, self.v)
        return (min(self.values), max(self.values))


def sample_potential(spec, n0, n1, seed):
    """Deterministic potential window V(n0..n1) for (spec, seed).

    For orbit drivers the initial condition sits at indices (-1, 0) (or
    index 0 for the skew shift); windows with n0 < that are reached by
    the explicit inverse map.
    """
    if n0 > n1:
        raise ValueError("need n0 <= n1")
    n = n1 - n0 + 1
    g = rng.rng_for(seed, rng.POTENTIAL)
    if spec.kind == "constant":
        vals = np.full(n, spec.v)
    elif spec.kind == "periodic":
        p = len(spec.values)
        vals = np.array([spec.values[k % p] for k in range(n0, n1 + 1)])
    elif spec.kind == "iid":
        _, a, b = spec.dist
        vals = g.uniform(a, b, size=n)
    elif spec.kind == "stdmap":
        if spec.init is not None:
            x_prev, x_curr = (reduce_angle(spec.init[0]),
                              reduce_angle(spec.init[1]))
        else:
            x_prev, x_curr = g.uniform(-math.pi, math.pi, size=2)
        # rewind (x_{-1}, x_0) to (x_{n0-1}, x_{n0}) with the inverse map
        for _ in range(-n0):
            x_prev, x_curr = (
                kernels._reduce(2.0 * x_prev + spec.lam * math.sin(x_prev)
                                - x_curr),
                x_prev,
            )
        for _ in range(n0):
            x_prev, x_curr = x_curr, kernels._reduce(
                2.0 * x_curr + spec.lam * math.sin(x_curr) - x_prev)
        vals = -np.cos(kernels.stdmap_orbit_values(x_prev, x_curr,
                                                   spec.lam, n))
    else:  # skewshift
        if spec.init is not None:
            coords = np.array([reduce_angle(c) for c in spec.init])
        else:
            coords = g.uniform(-math.pi, math.pi, size=spec.dim)
        if n0 != 0:
            # rewind/advance to index n0
            from .dynamics import (SkewShiftState, skew_shift_step,
                                   skew_shift_step_inverse)
            s = SkewShiftState(tuple(coords))
            step = skew_shift_step if n0 > 0 else skew_shift_step_inverse
            for _ in range(abs(n0)):
                s = step(s, spec.rotation_alpha)
            coords = np.array(s.coords)
        vals = kernels.skewshift_potential(coords, spec.rotation_alpha, n)
    return PotentialWindow(n0, vals, spec.lam)


def det_recursion_scaled(w, z, m):
    """Determinants D_0..D_m of growing truncations, overflow-safe.

    D_k = det(H_k - z) for the restriction to window indices 0..k-1,
    via D_k = (V(k-1) - z) D_{k-1} - lam^{-2} D_{k-2}, D_0 = 1.
    Returns (mantissas, exponents) with D_k = mantissas[k] * 2**exponents[k];
    mantissas are kept within [2**-512, 2**512] in modulus.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > len(w):
        raise ValueError(f"window of length {len(w)} cannot cover m={m}")
    inv_lam2 = 1.0 / (w.lam * w.lam)
    zz = z.z if isinstance(z, ComplexEnergy) else complex(z)
    mant = np.empty(m + 1, dtype=complex)
    expo = np.zeros(m + 1, dtype=np.int64)
    mant[0] = 1.0
    prev2, e2 = 1.0 + 0.0j, 0      # D_{k-2}
    prev1, e1 = 1.0 + 0.0j, 0      # D_{k-1}
    for k in range(1, m + 1):
        d = (w.values[k - 1] - zz) * prev1
        if k >= 2:
            d -= inv_lam2 * prev2 * 2.0 ** (e2 - e1)
        e = e1
        a = abs(d)
        if a != 0.0 and (a > 2.0 ** 512 or a < 2.0 ** -512):
            sh = int(math.floor(math.log2(a)))
            d = d * 2.0 ** -sh
            e += sh
        mant[k] = d
        expo[k] = e
        prev2, e2 = prev1, e1
        prev1, e1 = d, e
    return mant, expo


def det_recursion(w, z, m):
    """Determinants D_0..D_m as plain complex numbers.

    Overflows to complex(inf) if a determinant exceeds double range;
    use det_recursion_scaled when m is large.
    """
    mant, expo = det_recursion_scaled(w, z, m)
    out = np.empty(m + 1, dtype=complex)
    for k in range(m + 1):
        try:
            out[k] = mant[k] * 2.0 ** int(expo[k])
        except OverflowError:
            out[k] = complex(math.inf, math.inf)
    return out


def _tridiag_banded(w, zz):
    n = len(w)
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = 1.0 / w.lam
    ab[1, :] = w.values - zz
    ab[2, :-1] = 1.0 / w.lam
    return ab


def green_entry(w, z, i, j):
    """Entry (i, j) of (H_m - z)^{-1} for the restriction to the window.

    Indices are window-relative (0..m-1).  Solved as a tridiagonal
    system; a singular restriction at real z raises NumericalFailure.
    """
    n = len(w)
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError("indices outside the window")
    zz = z.z if isinstance(z, ComplexEnergy) else complex(z)
    e = np.zeros(n, dtype=complex)
    e[j] = 1.0
    with np.errstate(all="ignore"):
        try:
            x = solve_banded((1, 1), _tridiag_banded(w, zz), e)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"singular restriction at z={zz}") from exc
    if not np.all(np.isfinite(x.view(float))):
        raise NumericalFailure(f"singular restriction at z={zz}")
    return complex(x[i])


def sturm_count(w, E):
    """#{eigenvalues of the window restriction < E}.

    Pivot sign count of the LDL^T factorization of H - E.  An exactly
    zero pivot triggers a recount at E perturbed by 1e-14*(1+|E|).
    """
    edges = np.array([float(E)])
    for attempt in range(3):
        counts = _sturm_try(w, edges)
        if counts is not None:
            return int(counts[0])
        edges = edges + 1e-14 * (1.0 + abs(float(E)))
    # after two perturbations a zero pivot is numerically impossible
    return int(kernels.sturm_counts(w.values, 1.0 / w.lam, edges)[0])


def _sturm_try(w, edges):
    """Sturm counts, or None if an exactly-zero pivot occurred."""
    v = w.values
    t2 = 1.0 / (w.lam * w.lam)
    out = np.empty(len(edges), dtype=np.int64)
    for jj, E in enumerate(edges):
        count = 0
        d = v[0] - E
        if d == 0.0:
            return None
        if d < 0.0:
            count += 1
        for k in range(1, len(v)):
            d = (v[k] - E) - t2 / d
            if d == 0.0:
                return None
            if d < 0.0:
                count += 1
        out[jj] = count
    return out


def sturm_counts_array(w, edges):
    """Vectorized Sturm counts over many edges (kernel-backed)."""
    return kernels.sturm_counts(w.values, 1.0 / w.lam,
                                np.asarray(edges, dtype=float))


def det_bound(w, z, m):
    """(M + 1/lam)^m with M = max_n |V(n) - z|: a priori bound on |D_m|."""
    zz = z.z if isinstance(z, ComplexEnergy) else complex(z)
    M = float(np.max(np.abs(w.values[:max(m, 1)] - zz))) if m > 0 else 0.0
    return (M + 1.0 / w.lam) ** m
