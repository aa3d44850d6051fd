import numpy as np
import pytest

from fracwave import (EquationParams, FieldState, NumericalOverflowError,
                      RunOutcome, StopCondition, dispersion_symbol, evolve,
                      linear_exact, make_grid, rhs, rk4_step, stable_dt)
from fracwave.initial_data import sech2_profile

LINEAR = EquationParams(kappa=1.0, lam=0.0, mu=1.0, nu=1.0, alpha=0.5)


@pytest.fixture
def smooth_setup(unit_params):
    g = make_grid(8 * np.pi, 512)
    return g, sech2_profile(g, 1.0)


class TestRhs:
    def test_zero_is_fixed_point(self, unit_params, grid_pi_64):
        out = rhs(unit_params, grid_pi_64, np.zeros(64, complex))
        assert np.all(out == 0)

    def test_constant_is_fixed_point(self, unit_params, grid_pi_64):
        st = FieldState.from_values(np.full(64, 3.0), grid_pi_64)
        out = rhs(unit_params, grid_pi_64, st.spectrum)
        assert np.max(np.abs(out)) < 1e-14

    def test_linear_single_mode_matches_symbol(self, grid_pi_64):
        omega = dispersion_symbol(LINEAR, grid_pi_64)
        spec = np.zeros(64, complex)
        spec[3] = 1.0 + 0.5j
        spec[-3] = np.conj(spec[3])
        out = rhs(LINEAR, grid_pi_64, spec)
        assert np.isclose(out[3], -1j * omega[3] * spec[3], rtol=1e-14)

    def test_overflow_raises_with_time(self, unit_params, grid_pi_64):
        spec = np.full(64, np.inf + 0j)
        with pytest.raises(NumericalOverflowError) as err:
            rhs(unit_params, grid_pi_64, spec, time=4.5)
        assert err.value.time == 4.5

    def test_unregularized_rejected(self, grid_pi_64):
        p = EquationParams(1.0, 1.0, 1.0, 0.0, 0.5)
        with pytest.raises(ValueError, match="nu"):
            rhs(p, grid_pi_64, np.zeros(64, complex))


class TestRk4Step:
    def test_zero_stays_zero(self, unit_params, grid_pi_64):
        st = FieldState.from_values(np.zeros(64), grid_pi_64)
        out = rk4_step(unit_params, grid_pi_64, st, 0.1)
        assert np.all(out.values == 0)
        assert out.time == 0.1

    def test_one_step_error_scales_like_dt5(self, smooth_setup):
        g, st = smooth_setup
        errs = []
        for dt in (0.02, 0.01):
            stepped = rk4_step(LINEAR, g, st, dt)
            exact = linear_exact(LINEAR, g, st.spectrum, dt)
            errs.append(np.linalg.norm(stepped.spectrum - exact))
        ratio = errs[0] / errs[1]
        assert 24 < ratio < 40

    def test_self_convergence_fourth_order(self, unit_params, smooth_setup):
        g, st = smooth_setup

        def advance(dt, t_end=0.5):
            s = st
            for _ in range(round(t_end / dt)):
                s = rk4_step(unit_params, g, s, dt)
            return s

        dt = 2.0 ** -7
        a, b, c = advance(dt), advance(dt / 2), advance(dt / 4)
        order = np.log2(np.linalg.norm(a.values - b.values)
                        / np.linalg.norm(b.values - c.values))
        assert abs(order - 4.0) <= 0.2


class TestStableDt:
    def test_matches_symbol_peak(self, grid_pi_64):
        p = EquationParams(1.0, 1.0, 1.0, 1.0, 1.0)
        peak = np.max(np.abs(grid_pi_64.k * (1 - np.abs(grid_pi_64.k))
                             / (1 + np.abs(grid_pi_64.k))))
        assert np.isclose(stable_dt(p, grid_pi_64, 1.0), 2.8 / peak, rtol=1e-12)

    def test_doubling_resolution_roughly_halves_dt(self, unit_params):
        g1 = make_grid(10.0, 512)
        g2 = make_grid(10.0, 1024)
        r = stable_dt(unit_params, g1, 0.5) / stable_dt(unit_params, g2, 0.5)
        assert 1.7 < r < 2.3

    def test_degenerate_symbol_fallback(self):
        p = EquationParams(kappa=0.0, lam=1.0, mu=0.0, nu=1.0, alpha=0.5)
        g = make_grid(np.pi, 64)
        assert stable_dt(p, g, 1.0) == 1e-2

    @pytest.mark.parametrize("safety", [0.0, -1.0, 1.5])
    def test_invalid_safety(self, unit_params, grid_pi_64, safety):
        with pytest.raises(ValueError):
            stable_dt(unit_params, grid_pi_64, safety)


class TestLinearExact:
    def test_identity_at_t0(self, smooth_setup):
        g, st = smooth_setup
        out = linear_exact(LINEAR, g, st.spectrum, 0.0)
        assert np.array_equal(out, st.spectrum)

    def test_zero_symbol_mode_unchanged(self):
        # kappa = mu = 1, alpha = 1 makes omega vanish at |k| = 1
        p = EquationParams(1.0, 0.0, 1.0, 1.0, 1.0)
        g = make_grid(np.pi, 64)
        spec = np.zeros(64, complex)
        spec[1] = 2.0 - 1.0j
        spec[-1] = np.conj(spec[1])
        out = linear_exact(p, g, spec, 17.3)
        assert out[1] == spec[1]

    def test_stepper_tracks_oracle(self):
        g = make_grid(8 * np.pi, 1024)
        st = sech2_profile(g, 1.0)
        dt = stable_dt(LINEAR, g, 1.0) * 0.5
        n = int(np.ceil(1.0 / dt))
        s = st
        for _ in range(n):
            s = rk4_step(LINEAR, g, s, dt)
        exact = linear_exact(LINEAR, g, st.spectrum, n * dt)
        rel = np.linalg.norm(s.spectrum - exact) / np.linalg.norm(exact)
        assert rel < 1e-8


class TestEvolve:
    def test_linear_run_completes_and_matches(self):
        g = make_grid(8 * np.pi, 1024)
        st = sech2_profile(g, 1.0)
        dt = stable_dt(LINEAR, g, 0.5)
        states = []
        verdict = evolve(LINEAR, g, st, dt, StopCondition(max_time=1.0),
                         record_every=50, sink=lambda r, s: states.append(s))
        assert verdict.outcome is RunOutcome.COMPLETED
        assert verdict.end_time <= 1.0 + dt
        final = states[-1]
        exact = linear_exact(LINEAR, g, st.spectrum, final.time)
        rel = np.linalg.norm(final.spectrum - exact) / np.linalg.norm(exact)
        assert rel < 1e-8

    def test_mean_and_reality_preserved(self, unit_params, smooth_setup):
        g, st = smooth_setup
        recs = []
        evolve(unit_params, g, st, 5e-3, StopCondition(max_time=0.5),
               record_every=20, sink=lambda r, s: recs.append((r, s)))
        mean0 = st.spectrum[0]
        for rec, state in recs:
            assert abs(state.spectrum[0] - mean0) < 1e-14 * abs(mean0)
            tail = state.spectrum[1:]
            asym = np.max(np.abs(tail - np.conj(tail[::-1])))
            assert asym <= 1e-10 * np.max(np.abs(tail))

    def test_record_cadence(self, smooth_setup):
        g, st = smooth_setup
        recs = []
        evolve(LINEAR, g, st, 0.01, StopCondition(max_time=0.5),
               record_every=10, sink=lambda r, s: recs.append(r))
        # steps = 50 -> records at 0, 10, ..., 50
        assert len(recs) == 6
        assert recs[0].time == 0.0

    def test_small_hump_radiates_and_decays(self):
        p = EquationParams(1.0, 1.0, 1.0, 1.0, 0.9)
        g = make_grid(50 * np.pi, 2048)
        st = sech2_profile(g, 0.1)
        recs = []
        verdict = evolve(p, g, st, 2e-3, StopCondition(max_time=15.0),
                         record_every=250, sink=lambda r, s: recs.append(r))
        assert verdict.outcome is RunOutcome.COMPLETED
        after = [r.linf for r in recs if r.time >= 2.0]
        # amplitude decays once the initial transient has passed; the
        # dispersive ripple rides a few percent above the running envelope
        floor = after[0]
        for value in after[1:]:
            assert value <= floor * 1.05
            floor = min(floor, value)
        assert after[-1] < 0.6 * after[0]

    def test_amplitude_ceiling_aborts(self, unit_params, smooth_setup):
        g, st = smooth_setup
        verdict = evolve(unit_params, g, st, 1e-3,
                         StopCondition(max_time=1.0, linf_ceiling=0.5))
        assert verdict.outcome is RunOutcome.ABORTED
        assert "ceiling" in verdict.reason

    def test_drift_breach_is_blowup_verdict(self):
        # coarse, non-dealiased, large amplitude: aliasing wrecks I2 fast
        p = EquationParams(1.0, 1.0, 1.0, 1.0, 0.2)
        g = make_grid(10 * np.pi, 256)
        st = sech2_profile(g, 3.0)
        verdict = evolve(p, g, st, 2e-3,
                         StopCondition(max_time=20.0, drift_threshold=5e-3),
                         record_every=50, dealias=False)
        assert verdict.outcome is RunOutcome.BLOW_UP
        assert verdict.end_time < 20.0
        assert "drift" in verdict.reason

    def test_overflow_becomes_aborted_verdict(self, smooth_setup):
        p = EquationParams(1.0, 1.0, 1.0, 1.0, 0.2)
        g = make_grid(10 * np.pi, 256)
        st = sech2_profile(g, 3.0)
        with pytest.warns(RuntimeWarning):
            verdict = evolve(p, g, st, 5.0, StopCondition(max_time=500.0),
                             record_every=5, dealias=False)
        assert verdict.outcome is RunOutcome.ABORTED

    def test_warns_above_stability_limit(self, smooth_setup):
        g, st = smooth_setup
        limit = stable_dt(LINEAR, g, 1.0)
        with pytest.warns(RuntimeWarning, match="stability"):
            evolve(LINEAR, g, st, 2 * limit, StopCondition(max_time=4 * limit))

    def test_unregularized_rejected(self, smooth_setup):
        g, st = smooth_setup
        p = EquationParams(1.0, 1.0, 1.0, 0.0, 0.5)
        with pytest.raises(ValueError, match="nu"):
            evolve(p, g, st, 1e-3, StopCondition(max_time=1.0))


class TestStopCondition:
    def test_defaults(self):
        stop = StopCondition(max_time=5.0)
        assert stop.drift_threshold == 5e-3
        assert stop.linf_ceiling == 1e6

    @pytest.mark.parametrize("kw", [
        {"max_time": 0.0},
        {"max_time": 1.0, "drift_threshold": 0.0},
        {"max_time": 1.0, "linf_ceiling": -1.0},
    ])
    def test_positivity(self, kw):
        with pytest.raises(ValueError):
            StopCondition(**kw)
