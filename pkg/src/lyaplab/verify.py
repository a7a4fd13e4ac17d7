"""Cross-module invariant battery behind the `verify` subcommand.

Each check is a cheap version of a property the test suite verifies at
full budget; the CLI exits non-zero if any of them fails.
"""

import cmath
import math

import numpy as np

from . import bounds, dos, dynamics, lyapunov, operators, quad, resonance
from . import thouless as thj
from .operators import ComplexEnergy, OperatorSpec


def _fd_jacobian_det(s, lam, h=1e-6):
    """Central finite-difference Jacobian determinant of the kicked map."""
    def step(xp, xc):
        t = dynamics.std_map_step(dynamics.StdMapState(xp, xc), lam)
        return t.x_prev, t.x_curr

    cols = []
    for dxp, dxc in ((h, 0.0), (0.0, h)):
        fp = step(s.x_prev + dxp, s.x_curr + dxc)
        fm = step(s.x_prev - dxp, s.x_curr - dxc)
        cols.append([dynamics.reduce_angle(a - b) / (2 * h)
                     for a, b in zip(fp, fm)])
    (a, c), (b, d) = cols
    return a * d - b * c


def run_checks(seed=12345):
    """Return a list of (name, passed, detail) triples."""
    checks = []
    g = np.random.Generator(np.random.Philox(seed))

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    # dynamics -----------------------------------------------------------
    lam = 30.0
    worst = 0.0
    for _ in range(100):
        s = dynamics.StdMapState(*g.uniform(-3.0, 3.0, size=2))
        worst = max(worst, abs(_fd_jacobian_det(s, lam) - 1.0))
    add("stdmap area preservation", worst < 1e-6, f"max |det-1| = {worst:.2e}")

    s0 = dynamics.StdMapState(0.37, -1.2)
    s1 = dynamics.std_map_step_inverse(dynamics.std_map_step(s0, lam), lam)
    err = max(abs(dynamics.reduce_angle(s1.x_prev - s0.x_prev)),
              abs(dynamics.reduce_angle(s1.x_curr - s0.x_curr)))
    add("stdmap invertibility", err < 1e-12, f"err = {err:.2e}")

    xs = list(dynamics.std_map_orbit(dynamics.StdMapState(0.5, 1.0), lam,
                                     10000))
    res = max(abs(dynamics.reduce_angle(
        xs[k + 1] + xs[k - 1] - 2 * xs[k] - lam * math.sin(xs[k])))
        for k in range(1, len(xs) - 1))
    add("orbit recursion residual", res < 1e-9, f"max = {res:.2e}")

    # operators ----------------------------------------------------------
    spec = OperatorSpec.iid_uniform(10.0)
    ok = True
    worst = 0.0
    for k in range(100):
        w = operators.sample_potential(spec, 0, 7, seed + k)
        z = ComplexEnergy(0.3, 0.05)
        dets = operators.det_recursion(w, z, 8)
        H = (np.diag(w.values.astype(complex))
             + np.diag(np.full(7, 1.0 / w.lam), 1)
             + np.diag(np.full(7, 1.0 / w.lam), -1))
        dense = np.linalg.det(H - z.z * np.eye(8))
        worst = max(worst, abs(dets[8] - dense) / abs(dense))
        ok = ok and abs(dets[8]) <= operators.det_bound(w, z, 8) * (1 + 1e-12)
    add("det recursion vs dense", worst < 1e-10, f"rel = {worst:.2e}")
    add("determinant bound", ok)

    w = operators.sample_potential(spec, 0, 63, seed)
    z = ComplexEnergy(0.1, 0.01)
    gij = operators.green_entry(w, z, 31, 31)
    dets = operators.det_recursion(w, z, 64)
    wl = operators.PotentialWindow(0, w.values[:31], w.lam)
    wr = operators.PotentialWindow(0, w.values[32:], w.lam)
    cram = (abs(operators.det_recursion(wl, z, 31)[31]
                * operators.det_recursion(wr, z, 32)[32]) / abs(dets[64]))
    rel = abs(abs(gij) - cram) / cram
    add("green Cramer identity", rel < 1e-8, f"rel = {rel:.2e}")

    w = operators.sample_potential(spec, 0, 199, seed + 1)
    eigs = np.linalg.eigvalsh(
        np.diag(w.values) + np.diag(np.full(199, 1.0 / w.lam), 1)
        + np.diag(np.full(199, 1.0 / w.lam), -1))
    ok = all(operators.sturm_count(w, E) == int(np.sum(eigs < E))
             for E in g.uniform(-0.5, 1.5, size=50))
    add("sturm vs dense eigensolver", ok)

    # lyapunov -----------------------------------------------------------
    cspec = OperatorSpec.constant(10.0, 0.0)
    est = lyapunov.lyapunov_single(cspec, 1.0, 200000, seed)
    oracle = lyapunov.constant_oracle(0.0, 1.0, 10.0)
    add("constant Lyapunov oracle", abs(est.gamma - oracle) < 2e-2,
        f"err = {abs(est.gamma - oracle):.2e}")
    pspec = OperatorSpec.periodic(10.0, (-1.0, 1.0))
    est = lyapunov.lyapunov_single(pspec, 0.0, 200000, seed)
    oracle = lyapunov.periodic_oracle([-1.0, 1.0], 0.0, 10.0)
    add("periodic Lyapunov oracle", abs(est.gamma - oracle) < 2e-2,
        f"err = {abs(est.gamma - oracle):.2e}")
    sm = OperatorSpec.stdmap(40.0)
    est = lyapunov.lyapunov_avg(sm, 0.0, 100000, 8, seed)
    add("gamma nonnegative", est.gamma >= -1e-9)
    add("gamma upper bound",
        est.gamma <= lyapunov.upper_bound(sm) + 3 * est.stderr)

    # dos ----------------------------------------------------------------
    edges = np.linspace(-2.3, 2.3, 401)
    h = dos.dos_histogram(OperatorSpec.constant(1.0, 0.0), 2000, 1, edges,
                          seed)
    add("histogram mass", abs(h.total - 1.0) < 1e-12)
    st = dos.stieltjes(h, ComplexEnergy(0.3, 0.2))
    add("Herglotz property", st.imag > 0)

    # thouless -----------------------------------------------------------
    d1 = thj.thouless_gamma(h, 3.0, 7.0) - thj.thouless_gamma(h, 3.0, 1.0)
    add("thouless log-lam additivity", abs(d1 - math.log(7.0)) < 1e-12,
        f"err = {abs(d1 - math.log(7.0)):.2e}")

    # bounds -------------------------------------------------------------
    p = bounds.LowGammaBoundInputs(ln_lambda=5.0, t=0.5, xi=0.05,
                                   delta=1e-4, g=0.2)
    r = bounds.low_gamma_measure_bound(p)
    p2 = bounds.LowGammaBoundInputs(ln_lambda=5.0, t=1.0, xi=0.05,
                                    delta=1e-4, g=0.2)
    r2 = bounds.low_gamma_measure_bound(p2)
    add("exceptional-set bound monotone in t", r2.raw_bound > r.raw_bound)
    add("clamped bound", r.clamped_bound <= 2 * p.delta)

    z = ComplexEnergy(0.5, 0.01)
    est, se = bounds.det_moment_mc(("uniform", 0.0, 1.0), 1, z, 10.0, 0.0,
                                   100000, seed)
    closed = 2.0 * math.asinh(0.5 / 0.01)
    add("det moment m=1 closed form", abs(est - closed) <= 3 * se,
        f"est = {est:.4f}, exact = {closed:.4f}")
    lhs, rhs = bounds.density_integral_check(1.0, 0.01, 0.5,
                                             ("uniform", 0.0, 1.0))
    add("bounded-density integral", lhs <= rhs,
        f"lhs = {lhs:.4f}, rhs = {rhs:.4f}")

    # resonance ----------------------------------------------------------
    ok = True
    worst = 0.0
    for _ in range(200):
        x0, x1 = g.uniform(-math.pi, math.pi, size=2)
        lamr = g.uniform(5.0, 60.0)
        zz = ComplexEnergy(g.uniform(-0.5, 0.5), g.uniform(0.0, 0.2))
        d3 = resonance.det3(x0, x1, zz, lamr)
        xm1 = 2 * x0 + lamr * math.sin(x0) - x1
        wv = operators.PotentialWindow(
            0, -np.cos(np.array([xm1, x0, x1])), lamr)
        ref = operators.det_recursion(wv, zz, 3)[3]
        worst = max(worst, abs(d3 - ref) / max(abs(ref), 1e-300))
    add("det3 closed form vs recursion", worst < 1e-12,
        f"rel = {worst:.2e}")

    roots = resonance.phase_roots(10.0, 0.0)
    res = max(abs(dynamics.reduce_angle(10.0 * math.cos(r) + 2 * r))
              for r in roots)
    add("phase roots residual", len(roots) == 3 and res < 1e-10,
        f"count = {len(roots)}, res = {res:.2e}")

    cl = resonance.classify_coupling(20 * math.pi + 1.0)
    add("coupling classification", not cl.resonant)

    # quad ---------------------------------------------------------------
    r1 = quad.integrate_adaptive(lambda x: x ** -0.5, 0.0, 1.0,
                                 split_points=[0.0], tol=1e-8)
    add("sqrt singularity", r1.converged and abs(r1.value - 2.0) < 1e-8,
        f"err = {abs(r1.value - 2.0):.2e}")
    r2 = quad.integrate_adaptive(lambda x: -np.log(x), 0.0, 1.0,
                                 split_points=[0.0], tol=1e-8)
    add("log singularity", r2.converged and abs(r2.value - 1.0) < 1e-8)
    vals = [quad.scaled_pair_singularity_integral(d, 0.75)
            for d in (1e-3, 1e-2, 1e-1, 1.0)]
    add("pair-singularity scaling", max(vals) / min(vals) < 10,
        f"ratio = {max(vals) / min(vals):.2f}")

    return checks
