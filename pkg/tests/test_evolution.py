"""Time-evolution validation tests."""

import numpy as np
import pytest

from oddwaves import (
    ConfigurationError,
    CosineSeries,
    EvolutionConfig,
    ModelParams,
    NumericalError,
    SpectralField,
    continue_branch,
    critical_speed,
    derivative,
    dispersion_frequency,
    evolve,
    rhs,
    stable_dt,
    traveling_error,
)
from oddwaves.evolution import traveling_error_orders

from helpers import cosine

PA = ModelParams(0.5, 1.0, 0.5)


@pytest.fixture(scope="module")
def branch_point():
    br = continue_branch(1, PA, 0.02, ds=1e-3, n=48, tol=1e-11)
    assert not br.truncated
    return br.points[-1]


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            EvolutionConfig(dt=0.0, t_final=1.0)
        with pytest.raises(ConfigurationError):
            EvolutionConfig(dt=0.1, t_final=-1.0)
        with pytest.raises(ConfigurationError):
            EvolutionConfig(dt=0.1, t_final=1.0, scheme="euler")

    def test_stable_dt_matches_worst_linear_mode(self):
        n = 32
        top = max(abs(dispersion_frequency(k, PA)) for k in range(1, n + 1))
        assert np.isclose(stable_dt(n, PA), 2 * np.sqrt(2) / top)


class TestDispersion:
    def test_frequency_is_minus_k_times_critical_speed(self):
        for k in range(1, 20):
            assert np.isclose(dispersion_frequency(k, PA),
                              -k * critical_speed(k, PA), rtol=1e-14)


class TestRhs:
    def test_zero_field(self):
        assert rhs(CosineSeries(np.zeros(9)), PA).sup_norm() == 0.0

    def test_constant_field(self):
        coeffs = np.zeros(9)
        coeffs[0] = 5.0
        assert rhs(CosineSeries(coeffs), PA).sup_norm() == 0.0

    def test_inverse_mass_weights(self):
        # linear regime: rhs(cos kx) = symbol-driven sine over (2 + alpha0 k)
        k, delta = 4, 1e-9
        out = rhs(cosine(k, delta, n=16), PA)
        expect = -delta * dispersion_frequency(k, PA)
        assert abs(out.b[k] - expect) < 1e-6 * abs(expect)

    def test_traveling_relation_on_branch_point(self, branch_point):
        """rhs(φ) + c φ' must vanish at a converged branch point."""
        pt = branch_point
        n = pt.phi.n_modes
        drift = rhs(pt.phi, PA) + pt.c * derivative(pt.phi, 1).truncate(n)
        assert drift.sup_norm() < 10 * 1e-11


class TestEvolve:
    def test_zero_stays_zero(self):
        cfg = EvolutionConfig(dt=1e-2, t_final=0.1, n_modes=16)
        traj = evolve(CosineSeries(np.zeros(5)), PA, cfg)
        assert all(st.sup_norm() == 0.0 for st in traj.states)

    def test_zero_horizon(self):
        cfg = EvolutionConfig(dt=1e-2, t_final=0.0, n_modes=16)
        traj = evolve(cosine(1, 0.1, n=16), PA, cfg)
        assert len(traj.states) == 1 and traj.times[0] == 0.0

    def test_linear_mode_rotation(self):
        """Infinitesimal data follows the exact multiplier solution."""
        delta, k = 1e-8, 3
        cfg = EvolutionConfig(dt=2e-3, t_final=1.0, n_modes=32)
        traj = evolve(cosine(k, delta, n=32), PA, cfg)
        w = dispersion_frequency(k, PA)
        for t, st in zip(traj.times, traj.states):
            gap = max(abs(st.a[k] - delta * np.cos(w * t)),
                      abs(st.b[k] + delta * np.sin(w * t)))
            assert gap / delta < 1e-6
        amp = np.hypot(traj.states[-1].a[k], traj.states[-1].b[k])
        assert abs(amp / delta - 1.0) < 1e-6

    def test_mass_conservation(self, branch_point):
        cfg = EvolutionConfig(dt=5e-3, t_final=0.5, n_modes=48)
        shifted = SpectralField(branch_point.phi.a + np.r_[0.25, np.zeros(48)])
        traj = evolve(shifted, PA, cfg)
        assert traj.mass_drift < 1e-12 * (1 + cfg.t_final)

    def test_nan_abort_reports_time_and_state(self):
        # enormous amplitude with a huge step leaves the stability region
        cfg = EvolutionConfig(dt=10.0, t_final=100.0, n_modes=32)
        bomb = cosine(8, 1e6, n=32)
        with pytest.raises(NumericalError) as err:
            evolve(bomb, PA, cfg)
        assert err.value.time is not None
        assert err.value.last_state is not None
        assert np.isfinite(err.value.last_state.a).all()

    def test_rejects_oversized_initial_data(self):
        cfg = EvolutionConfig(dt=1e-2, t_final=0.1, n_modes=8)
        with pytest.raises(ConfigurationError):
            evolve(cosine(1, 0.1, n=16), PA, cfg)


class TestTravelingError:
    def test_trivial_point_is_exact(self):
        br = continue_branch(1, PA, 0.0, n=8)
        cfg = EvolutionConfig(dt=1e-2, t_final=0.1, n_modes=8)
        assert traveling_error(br.points[0], PA, cfg) == 0.0

    def test_small_amplitude_branch_point(self, branch_point):
        cfg = EvolutionConfig(dt=1e-3, t_final=0.5, n_modes=48)
        assert traveling_error(branch_point, PA, cfg) < 1e-4

    def test_fourth_order_decay(self, branch_point):
        """Halving dt inside the stability window shows RK4 decay."""
        dt0 = 0.8 * stable_dt(48, PA)
        cfg = EvolutionConfig(dt=dt0, t_final=1.0, n_modes=48)
        errs, rates = traveling_error_orders(branch_point, PA, cfg, halvings=2)
        assert all(e > 0 for e in errs)
        assert min(rates) > 3.7
