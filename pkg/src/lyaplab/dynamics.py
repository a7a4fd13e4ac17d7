"""Measure-preserving drivers: the standard map and the skew shift.

Angles live on [-pi, pi); the kicked map

    T(x1, x2) = (x2, 2*x2 + lam*sin(x2) - x1)

is iterated in double precision with reduction after every step.  At
large coupling this produces pseudo-orbits, which is fine here: every
consumer averages over orbits or initial conditions.
"""

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def reduce_angle(x):
    """Canonical representative of x in [-pi, pi).  pi maps to -pi."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    y = x - TWO_PI * round(x / TWO_PI)
    if y >= math.pi:
        y -= TWO_PI
    elif y < -math.pi:
        y += TWO_PI
    return y


@dataclass(frozen=True)
class StdMapState:
    """Pair (x_{n-1}, x_n) determining a standard-map orbit."""
    x_prev: float
    x_curr: float

    def __post_init__(self):
        object.__setattr__(self, "x_prev", reduce_angle(self.x_prev))
        object.__setattr__(self, "x_curr", reduce_angle(self.x_curr))


@dataclass(frozen=True)
class SkewShiftState:
    """Point (w_1, ..., w_d) on the d-torus, d >= 1."""
    coords: tuple

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("skew shift needs at least one coordinate")
        object.__setattr__(self, "coords",
                           tuple(reduce_angle(c) for c in self.coords))


def std_map_step(s, lam):
    """One forward iterate of the kicked map."""
    x_next = 2.0 * s.x_curr + lam * math.sin(s.x_curr) - s.x_prev
    return StdMapState(s.x_curr, reduce_angle(x_next))


def std_map_step_inverse(s, lam):
    """Explicit inverse (x1, x2) -> (2*x1 + lam*sin(x1) - x2, x1)."""
    x_before = 2.0 * s.x_prev + lam * math.sin(s.x_prev) - s.x_curr
    return StdMapState(reduce_angle(x_before), s.x_prev)


def std_map_orbit(init, lam, n_steps):
    """Yield x_{-1}, x_0, ..., x_{n_steps} along the orbit of ``init``.

    Streamed: O(1) memory regardless of n_steps.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    yield init.x_prev
    s = init
    for _ in range(n_steps + 1):
        yield s.x_curr
        s = std_map_step(s, lam)


def skew_shift_step(s, alpha):
    """T(w_1,...,w_d) = (w_1 + alpha, w_2 + w_1, ..., w_d + w_{d-1})."""
    c = s.coords
    new = [reduce_angle(c[0] + alpha)]
    for k in range(1, len(c)):
        new.append(reduce_angle(c[k] + c[k - 1]))
    return SkewShiftState(tuple(new))


def skew_shift_step_inverse(s, alpha):
    """Inverse of the skew shift, recovered coordinate by coordinate."""
    c = s.coords
    prev = [reduce_angle(c[0] - alpha)]
    for k in range(1, len(c)):
        prev.append(reduce_angle(c[k] - prev[k - 1]))
    return SkewShiftState(tuple(prev))


def skew_shift_orbit(init, alpha, n_steps):
    """Yield the states T^0 w, T^1 w, ..., T^{n_steps} w."""
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    s = init
    yield s
    for _ in range(n_steps):
        s = skew_shift_step(s, alpha)
        yield s
