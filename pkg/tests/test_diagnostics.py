import numpy as np
import pytest

from fracwave import (EquationParams, FieldState, invariant_I0, invariant_I1,
                      invariant_I2, make_grid, sobolev_norm, tail_indicator)
from fracwave.diagnostics import CSV_HEADER, make_record
from fracwave.initial_data import sech2_profile


@pytest.fixture
def sech2_state():
    g = make_grid(20 * np.pi, 1024)
    return g, sech2_profile(g, 1.0)


class TestI0:
    def test_zero(self, grid_pi_64):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        assert invariant_I0(st, grid_pi_64) == 0.0

    def test_sech2_integral(self, sech2_state):
        g, st = sech2_state
        assert abs(invariant_I0(st, g) - 2.0 * np.tanh(20 * np.pi)) < 1e-12

    def test_cosine_is_mean_free(self, grid_pi_64):
        st = FieldState.from_values(np.cos(grid_pi_64.x), grid_pi_64)
        assert abs(invariant_I0(st, grid_pi_64)) < 1e-12

    def test_matches_zero_mode(self, grid_pi_64, rng):
        st = FieldState.from_values(rng.standard_normal(64), grid_pi_64)
        assert np.isclose(invariant_I0(st, grid_pi_64),
                          st.spectrum[0].real, rtol=1e-13)


class TestI1:
    def test_equals_I0_for_positive_alpha(self, sech2_state, rng):
        g, _ = sech2_state
        st = FieldState.from_values(rng.standard_normal(g.N), g)
        p = EquationParams(1.0, 1.0, 1.0, 3.7, 0.5)
        assert invariant_I1(st, g, p) == invariant_I0(st, g)

    def test_zero_field(self, grid_pi_64, unit_params):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        assert invariant_I1(st, grid_pi_64, unit_params) == 0.0

    def test_sech2_value(self, sech2_state):
        g, st = sech2_state
        p = EquationParams(1.0, 1.0, 1.0, 1.0, 0.5)
        assert abs(invariant_I1(st, g, p) - 2.0) < 1e-10


class TestI2:
    def test_zero_field(self, grid_pi_64, unit_params):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        assert invariant_I2(st, grid_pi_64, unit_params) == 0.0

    def test_sech2_unregularized(self):
        # integral of sech^4 = 4/3; nu=0 drops the fractional term
        g = make_grid(20.0, 512)
        st = sech2_profile(g, 1.0)
        p = EquationParams(1.0, 1.0, 1.0, 0.0, 0.5)
        assert abs(invariant_I2(st, g, p) - 4.0 / 3.0) < 1e-10

    def test_cosine_single_mode_parseval(self):
        g = make_grid(np.pi, 64)
        st = FieldState.from_values(np.cos(g.x), g)
        p = EquationParams(1.0, 1.0, 1.0, 1.0, 2.0)
        assert abs(invariant_I2(st, g, p) - 2.0 * np.pi) < 1e-12


class TestSobolevNorm:
    def test_zero_field(self, grid_pi_64):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        assert sobolev_norm(st, grid_pi_64, 1.0) == 0.0

    def test_s0_is_l2(self, grid_pi_64, rng):
        u = rng.standard_normal(64)
        st = FieldState.from_values(u, grid_pi_64)
        l2 = np.sqrt(grid_pi_64.dx * np.sum(u ** 2))
        assert np.isclose(sobolev_norm(st, grid_pi_64, 0.0), l2, rtol=1e-12)

    def test_cosine_h1(self, grid_pi_64):
        st = FieldState.from_values(np.cos(grid_pi_64.x), grid_pi_64)
        assert abs(sobolev_norm(st, grid_pi_64, 1.0) - np.sqrt(2 * np.pi)) < 1e-12

    def test_monotone_in_s(self, grid_pi_64, rng):
        st = FieldState.from_values(rng.standard_normal(64), grid_pi_64)
        norms = [sobolev_norm(st, grid_pi_64, s) for s in (0.0, 0.5, 1.0, 2.0, 3.5)]
        assert all(a <= b for a, b in zip(norms, norms[1:]))

    def test_negative_index_rejected(self, grid_pi_64):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        with pytest.raises(ValueError):
            sobolev_norm(st, grid_pi_64, -1.0)


class TestTailIndicator:
    def test_band_limited_is_zero(self):
        g = make_grid(np.pi, 64)
        st = FieldState.from_values(np.cos(g.x), g)
        assert tail_indicator(st, g) < 1e-14

    def test_white_noise_is_order_one(self, grid_pi_64, rng):
        st = FieldState.from_values(rng.standard_normal(64), grid_pi_64)
        assert tail_indicator(st, grid_pi_64) > 0.01

    def test_resolved_sech2(self, sech2_state):
        g, st = sech2_state
        assert tail_indicator(st, g) < 1e-8

    def test_zero_state(self, grid_pi_64):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        assert tail_indicator(st, grid_pi_64) == 0.0


class TestRecord:
    def test_csv_row_layout(self, grid_pi_64, unit_params):
        st = FieldState.from_values(np.cos(grid_pi_64.x), grid_pi_64, time=2.5)
        rec = make_record(st, grid_pi_64, unit_params, I2_reference=1.0,
                          sobolev_index=1.0)
        row = rec.csv_row()
        assert len(row.split(",")) == len(CSV_HEADER.split(","))
        assert row.startswith("2.5,")
        # 17 significant digits survive parsing
        parsed = [float(tok) for tok in row.split(",")]
        assert parsed[5] == rec.linf

    def test_drift_relative(self, grid_pi_64, unit_params):
        st = FieldState.from_values(np.cos(grid_pi_64.x), grid_pi_64)
        i2 = invariant_I2(st, grid_pi_64, unit_params)
        rec = make_record(st, grid_pi_64, unit_params, I2_reference=2 * i2,
                          sobolev_index=1.0)
        assert np.isclose(rec.drift_I2, 0.5, rtol=1e-12)
