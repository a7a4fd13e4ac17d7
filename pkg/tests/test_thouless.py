import math

import numpy as np
import pytest

from lyaplab.dos import SpectralHistogram, dos_histogram
from lyaplab.lyapunov import constant_oracle
from lyaplab.operators import OperatorSpec
from lyaplab.thouless import (ThoulessRow, log_potential, thouless_gamma,
                              thouless_scan)


class TestLogPotential:
    def test_single_atom(self):
        h = SpectralHistogram(np.array([0.3, 0.3]), np.array([1.0]))
        assert log_potential(h, 1.3) == pytest.approx(0.0, abs=1e-15)
        assert log_potential(h, 0.3 + math.e) == pytest.approx(1.0)
        assert log_potential(h, 0.3) == -math.inf

    def test_uniform_bin_closed_form(self):
        # uniform mass on [0,1], E outside: integral of ln(E - x)
        h = SpectralHistogram(np.array([0.0, 1.0]), np.array([1.0]))
        E = 3.0
        exact = E * math.log(E) - (E - 1) * math.log(E - 1) - 1
        assert log_potential(h, E) == pytest.approx(exact, abs=1e-12)

    def test_uniform_bin_interior(self):
        # E inside the bin: both one-sided pieces, still finite
        h = SpectralHistogram(np.array([0.0, 1.0]), np.array([1.0]))
        E = 0.25
        exact = (E * math.log(E) - E
                 + (1 - E) * math.log(1 - E) - (1 - E))
        assert log_potential(h, E) == pytest.approx(exact, abs=1e-12)

    def test_lambda_additivity(self):
        h = SpectralHistogram(np.array([0.0, 1.0]), np.array([1.0]))
        d = thouless_gamma(h, 3.0, 6.0) - thouless_gamma(h, 3.0, 2.0)
        assert d == pytest.approx(math.log(3.0), abs=1e-12)

    def test_bad_lambda(self):
        h = SpectralHistogram(np.array([0.0, 1.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            thouless_gamma(h, 0.0, -1.0)


class TestConstantModelIdentity:
    def test_closed_forms_agree(self):
        # gamma(E) = ln lam + log-potential of the arcsine DOS supported
        # on [v - 2/lam, v + 2/lam]; both sides in closed form
        lam, v = 10.0, 0.0
        r = 2.0 / lam
        for E in (1.0, 0.7, -0.5, 2.0):
            w = (E - v) / r
            rhs = math.log(lam) + math.log(r / 2) \
                + math.log(abs(w) + math.sqrt(w * w - 1))
            assert constant_oracle(v, E, lam) == pytest.approx(rhs,
                                                               abs=1e-12)

    def test_against_binned_arcsine(self):
        # package log_potential on a finely binned arcsine law
        lam, v = 10.0, 0.0
        edges = np.linspace(v - 2 / lam, v + 2 / lam, 4001)
        u = np.clip((edges - v) * lam / 2.0, -1.0, 1.0)
        ids = np.arccos(-u) / math.pi
        h = SpectralHistogram(edges, np.diff(ids))
        for E in (0.5, 1.0, -0.8):
            assert thouless_gamma(h, E, lam) == pytest.approx(
                constant_oracle(v, E, lam), abs=1e-2)


class TestScan:
    def test_rows_and_residuals(self):
        spec = OperatorSpec.iid_uniform(10.0)
        grid = np.linspace(0.2, 0.8, 5)
        edges = np.linspace(-0.5, 1.5, 801)
        rows, h = thouless_scan(spec, grid, 50000, 4, 2000, 16, edges, 0)
        assert len(rows) == 5
        assert h.total == pytest.approx(1.0, abs=1e-12)
        for r in rows:
            assert r.residual == r.gamma_transfer - r.gamma_thouless
            assert abs(r.residual) < 0.2

    def test_empty_grid_raises(self):
        spec = OperatorSpec.iid_uniform(10.0)
        with pytest.raises(ValueError):
            thouless_scan(spec, [], 10, 1, 100, 1,
                          np.linspace(-1, 2, 10), 0)
