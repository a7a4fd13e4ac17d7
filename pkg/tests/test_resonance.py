import math

import numpy as np
import pytest

from lyaplab.dynamics import reduce_angle
from lyaplab.operators import ComplexEnergy, PotentialWindow, det_recursion
from lyaplab.resonance import (circle_dist, classify_coupling, det3,
                               excluded_center_intervals,
                               inner_resonance_integral, kick_phase,
                               kick_phase_roots, phase_proximity_integral,
                               phase_roots)

TWO_PI = 2.0 * math.pi


class TestDet3:
    def test_worked_example(self):
        # x0 = pi/2, x1 = 0, z = 0, lam = 10
        val = det3(math.pi / 2, 0.0, 0.0, 10.0)
        assert val == pytest.approx(0.018390715290764477, rel=1e-12)

    def test_matches_recursion(self):
        g = np.random.Generator(np.random.Philox(0))
        for _ in range(300):
            x0, x1 = g.uniform(-math.pi, math.pi, size=2)
            lam = float(g.uniform(5.0, 60.0))
            z = ComplexEnergy(float(g.uniform(-0.5, 0.5)),
                              float(g.uniform(0.0, 0.2)))
            xm1 = 2 * x0 + lam * math.sin(x0) - x1
            w = PotentialWindow(0, -np.cos(np.array([xm1, x0, x1])), lam)
            ref = det_recursion(w, z, 3)[3]
            assert det3(x0, x1, z, lam) == pytest.approx(ref, rel=1e-11)

    def test_hopping_free_factorization(self):
        x0, x1, lam, z = 0.7, -0.3, 20.0, 0.1
        xm1 = 2 * x0 + lam * math.sin(x0) - x1
        expected = -((math.cos(xm1) + z) * (math.cos(x0) + z)
                     * (math.cos(x1) + z))
        assert det3(x0, x1, z, lam, hopping=False) == pytest.approx(expected)


class TestPhaseGeometry:
    def test_kick_phase_range(self):
        g = np.random.Generator(np.random.Philox(1))
        for x in g.uniform(-math.pi, math.pi, size=100):
            y = kick_phase(float(x), 15.0)
            assert -math.pi <= y < math.pi

    def test_circle_dist(self):
        assert circle_dist(0.1, 0.1) == 0.0
        assert circle_dist(math.pi, 0.0) == pytest.approx(math.pi)
        assert circle_dist(0.1, 0.1 + TWO_PI) == pytest.approx(0.0,
                                                               abs=1e-12)
        assert float(np.max(circle_dist(
            np.linspace(-10, 10, 1000), 0.3))) <= math.pi


class TestPhaseRoots:
    def test_count_and_residual(self):
        lam = 10.0
        roots = phase_roots(lam, 0.0)
        assert len(roots) == 3
        for r in roots:
            assert abs(reduce_angle(lam * math.cos(r) + 2 * r)) < 1e-10

    def test_all_targets_covered(self):
        lam = 30.0
        lo, hi = -math.pi / 2, 3 * math.pi / 2
        roots = phase_roots(lam, 1.0, lo, hi)
        # brute-force residual scan: every near-zero of the reduced phase
        # must be close to a reported root
        xs = np.linspace(lo, hi, 200001)
        vals = np.array([reduce_angle(lam * math.cos(x) + 2 * x - 1.0)
                         for x in xs])
        sign_flips = np.nonzero((vals[:-1] * vals[1:] < 0)
                                & (np.abs(vals[:-1]) < 1.0))[0]
        for i in sign_flips:
            assert min(abs(xs[i] - r) for r in roots) < 1e-3

    def test_kick_phase_roots_residual(self):
        lam = 25.0
        roots = kick_phase_roots(lam, 0.5)
        assert roots
        for r in roots:
            assert abs(reduce_angle(2 * r + lam * math.sin(r) - 0.5)) < 1e-10

    def test_validation(self):
        with pytest.raises(ValueError):
            phase_roots(-1.0, 0.0)


class TestClassify:
    def test_resonant_at_2pi_multiple(self):
        assert classify_coupling(20 * math.pi).resonant

    def test_resonant_at_pi_offset(self):
        assert classify_coupling(21 * math.pi).resonant

    def test_regular_off_resonance(self):
        cls = classify_coupling(20 * math.pi + 1.0)
        assert not cls.resonant
        assert cls.lambda_bar == pytest.approx(1.0, abs=1e-12)

    def test_threshold_scaling(self):
        lam = 40 * math.pi + 0.3
        assert not classify_coupling(lam, delta_exp=0.5).resonant
        assert classify_coupling(lam, delta_exp=0.05).resonant

    def test_validation(self):
        with pytest.raises(ValueError):
            classify_coupling(1.0)
        with pytest.raises(ValueError):
            classify_coupling(10.0, delta_exp=0.0)


class TestInnerIntegral:
    def test_separated_zeros_converge(self):
        res = inner_resonance_integral(0.3, 2.0, 0.6, 1e-3)
        assert res.converged
        assert res.value > 0

    def test_symmetry_in_theta(self):
        a = inner_resonance_integral(0.3, 1.2, 0.6, 1e-3)
        b = inner_resonance_integral(0.3, -1.2, 0.6, 1e-3)
        assert a.value == pytest.approx(b.value, rel=1e-2)

    def test_double_zero_flagged(self):
        # theta = 0 and eps = 0 collapses the two cosine factors: every
        # zero is a double zero, non-integrable for alpha >= 1/2
        res = inner_resonance_integral(0.3, 0.0, 0.6, 0.0)
        assert not res.converged

    def test_validation(self):
        with pytest.raises(ValueError):
            inner_resonance_integral(0.3, 1.0, 1.2, 1e-3)


class TestPhaseProximityIntegral:
    def test_regular_converges(self):
        res = phase_proximity_integral(21 * math.pi, 0.0, 0.0, 0.6)
        assert res.converged

    def test_resonant_low_alpha_converges(self):
        res = phase_proximity_integral(20 * math.pi, 0.0, 0.0, 0.6)
        assert res.converged

    def test_resonant_high_alpha_blows_up(self):
        reg = phase_proximity_integral(21 * math.pi, 0.0, 0.0, 0.9,
                                       tol=5e-2)
        res = phase_proximity_integral(20 * math.pi, 0.0, 0.0, 0.9,
                                       tol=5e-2)
        assert reg.converged
        assert (not res.converged) or res.value >= 10.0 * reg.value

    def test_validation(self):
        with pytest.raises(ValueError):
            phase_proximity_integral(10.0, 0.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            phase_proximity_integral(10.0, 0.0, 1.5, 0.7)


class TestExcludedIntervals:
    def test_symmetric_at_zero_energy(self):
        out = excluded_center_intervals(10.0, 0.0, 1.0)
        assert len(out) == 2
        (a1, b1), (a2, b2) = out
        assert a1 == pytest.approx(-b2) and b1 == pytest.approx(-a2)
        # the excluded set contains the zeros of cos
        assert a1 < math.pi / 2 < b1

    def test_width_shrinks_with_lambda(self):
        w1 = np.diff(excluded_center_intervals(10.0, 0.0, 1.0)[0])[0]
        w2 = np.diff(excluded_center_intervals(100.0, 0.0, 1.0)[0])[0]
        assert w2 < w1 / 50
