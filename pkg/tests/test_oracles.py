import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sttf.discretization import GridSpacing, discrete_sttf
from sttf.errors import BoundaryContamination, CflViolation
from sttf.oracles import (
    CauchyData,
    PeriodicGrid2D,
    convergence_orders,
    dalembert,
    dft_gain_oracle,
    discrete_wave_frequency,
    fourier_mode,
    gaussian_data,
    leapfrog_error,
    measured_dispersion,
    wave_leapfrog,
)
from sttf.pde import PdeModel

ZERO = lambda x: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731


class TestDftOracle:
    @pytest.mark.parametrize("pde", [
        PdeModel.wave(1.0),
        PdeModel.from_coefficients(a=1, c=1),
        PdeModel.from_coefficients(1, 1, 1, 1, 1, 1),
        PdeModel.from_coefficients(2.0, -0.5, 3.0, 1.0, -2.0, 0.25),
    ])
    @pytest.mark.parametrize("mode", ["paper", "corrected"])
    def test_gain_matches_symbol(self, pde, mode):
        H = discrete_sttf(pde, GridSpacing(0.5, 0.25), mode)
        assert dft_gain_oracle(H, 8, 12) <= 1e-10

    def test_grid_size_checked(self):
        H = discrete_sttf(PdeModel.wave(1.0), GridSpacing(1, 1))
        with pytest.raises(ValueError):
            dft_gain_oracle(H, 3, 8)
        with pytest.raises(ValueError):
            PeriodicGrid2D(np.zeros((3, 8)))

    def test_fourier_mode_is_periodic(self):
        v = fourier_mode(6, 8, 2, 3).values
        assert v[0, 0] == 1
        np.testing.assert_allclose(np.abs(v), 1.0)


class TestDalembert:
    def test_pure_displacement(self):
        data = CauchyData(lambda x: np.sin(x), ZERO, 2.0)
        # (sin(x - 2t) + sin(x + 2t)) / 2 = sin x cos 2t
        assert dalembert(data, 0.3, 0.7) == pytest.approx(math.sin(0.3) * math.cos(1.4), abs=1e-15)

    def test_initial_time(self):
        data = CauchyData(lambda x: np.exp(x), lambda x: np.cos(x), 1.0)
        assert dalembert(data, 0.4, 0.0) == pytest.approx(math.exp(0.4), rel=1e-15)

    def test_cubic_velocity_exact(self):
        # Simpson integrates cubics exactly: int_{x-t}^{x+t} s^3 ds / 2
        data = CauchyData(ZERO, lambda s: np.asarray(s, dtype=float) ** 3, 1.0)
        x, t = 0.5, 0.25
        exact = ((x + t) ** 4 - (x - t) ** 4) / 8
        assert dalembert(data, x, t, quad_steps=2) == pytest.approx(exact, rel=1e-14)

    def test_bad_arguments(self):
        data = CauchyData(ZERO, ZERO, 1.0)
        with pytest.raises(ValueError):
            dalembert(data, 0.0, -1.0)
        with pytest.raises(ValueError):
            dalembert(data, 0.0, 1.0, quad_steps=3)
        with pytest.raises(ValueError):
            CauchyData(ZERO, ZERO, 0.0)

    @settings(max_examples=50)
    @given(st.floats(-2, 2), st.floats(0, 2), st.floats(0.2, 3))
    def test_solves_wave_equation(self, x, t, alpha):
        data = gaussian_data(alpha, width=0.5, travelling=True)
        # right-moving pulse keeps its shape
        exact = float(data.phi0(np.asarray(x - alpha * t)))
        assert dalembert(data, x, t, quad_steps=512) == pytest.approx(exact, abs=1e-8)


class TestLeapfrog:
    def test_zero_data_stays_zero(self):
        sim = wave_leapfrog(CauchyData(ZERO, ZERO, 1.0), 0.1, 0.05, 2.0, 20)
        assert np.all(sim.values == 0)
        assert sim.values.shape == (41, 21)
        assert sim.lam == pytest.approx(0.25)

    def test_gaussian_matches_dalembert(self):
        data = gaussian_data(1.0)
        sim = wave_leapfrog(data, 0.0125, 0.00625, 4.0, 160)
        exact = np.array([dalembert(data, x, sim.t[-1]) for x in sim.x])
        assert np.max(np.abs(sim.values[:, -1] - exact)) <= 1e-3

    def test_second_order(self):
        data = gaussian_data(1.0)
        errs = [leapfrog_error(data, h, h / 2, 4.0, 1.0) for h in (0.1, 0.05, 0.025, 0.0125)]
        for p in convergence_orders(errs):
            assert abs(p - 2) <= 0.3

    def test_cfl_violation(self):
        with pytest.raises(CflViolation):
            wave_leapfrog(gaussian_data(2.0), 0.1, 0.1, 4.0, 5)

    def test_lambda_one_allowed(self):
        sim = wave_leapfrog(gaussian_data(1.0), 0.1, 0.1, 4.0, 5)
        assert sim.lam == pytest.approx(1.0)

    def test_boundary_contamination(self):
        with pytest.raises(BoundaryContamination):
            wave_leapfrog(gaussian_data(1.0), 0.1, 0.05, 2.0, 200)

    def test_explicit_support(self):
        bump = CauchyData(ZERO, ZERO, 1.0, support=(-0.5, 0.5))
        with pytest.raises(BoundaryContamination):
            wave_leapfrog(bump, 0.1, 0.1, 1.0, 10)

    def test_t_end_must_be_whole_steps(self):
        with pytest.raises(ValueError):
            leapfrog_error(gaussian_data(1.0), 0.1, 0.03, 4.0, 1.0)


class TestDispersion:
    def test_exact_at_lambda_one(self):
        assert discrete_wave_frequency(1.0, 0.1, 0.1, 3.0) == pytest.approx(3.0, rel=1e-14)

    def test_lags_continuous_below_cfl(self):
        w = discrete_wave_frequency(1.0, 0.1, 0.05, 10.0)
        assert w < 10.0
        assert w == pytest.approx(2 / 0.05 * math.asin(0.5 * math.sin(0.5)), rel=1e-15)

    def test_measured_matches_scheme(self):
        alpha, h, k = 1.0, 0.05, 0.025
        data = gaussian_data(alpha, width=1.0, kappa=3.0, travelling=True)
        sim = wave_leapfrog(data, h, k, 20.0, 400)
        kap, omega = measured_dispersion(sim, 3.0)
        assert abs(kap - 3.0) < 2 * math.pi / (sim.x.size * h)
        assert omega == pytest.approx(discrete_wave_frequency(alpha, h, k, kap), rel=1e-3)
