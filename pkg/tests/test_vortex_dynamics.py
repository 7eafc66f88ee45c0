import math

import numpy as np
import pytest
from conftest import (
    CASE1_ENERGY,
    CASE1_PERIOD,
    CASE1_SPEED,
    rotate,
    single_vortex_angular_speed,
    single_vortex_energy,
    single_vortex_velocity,
)

from vortexlab.core import Termination, VortexConfiguration
from vortexlab.dynamics import (
    IntegratorConfig,
    convergence_study,
    fit_rate,
    forcing,
    integrate,
    interaction_gradient,
    renormalized_energy,
    trajectory_energy_drift,
    w_epsilon,
)
from vortexlab.errors import (
    DegenerateConfigError,
    DegenerateFitError,
    GuardTriggeredError,
    InvalidConfigError,
    InvalidParamsError,
)


class TestEnergy:
    @pytest.mark.parametrize("m", [0.0, 0.3, 0.5, 0.8])
    def test_single_vortex(self, m):
        config = VortexConfiguration.from_points([(m, 0.0)], [1])
        assert renormalized_energy(config, 64) == pytest.approx(
            single_vortex_energy(m), abs=1e-10
        )

    def test_case1(self, case1):
        assert renormalized_energy(case1, 64) == pytest.approx(CASE1_ENERGY, abs=1e-10)
        assert renormalized_energy(case1, 64) == pytest.approx(-0.4055, abs=1e-4)

    def test_invariant_under_rotation(self, case1):
        rotated = case1.moved_to(rotate(case1.positions, 0.7))
        assert renormalized_energy(rotated, 64) == pytest.approx(
            renormalized_energy(case1, 64), abs=1e-12
        )

    def test_empty_is_zero(self):
        assert renormalized_energy(VortexConfiguration.from_points([], []), 8) == 0.0

    def test_w_epsilon_adds_core_energy(self, case1):
        gamma = 0.4
        expected = 2 * (gamma + math.pi * math.log(10.0)) + renormalized_energy(case1, 64)
        assert w_epsilon(case1, 64, 0.1, gamma) == pytest.approx(expected, rel=1e-14)
        with pytest.raises(InvalidParamsError):
            w_epsilon(case1, 64, 0.0, gamma)


class TestForcing:
    def test_centered_vortex_is_at_rest(self):
        config = VortexConfiguration.from_points([(0.0, 0.0)], [1])
        np.testing.assert_allclose(forcing(config, 32).velocities, [[0.0, 0.0]], atol=1e-14)

    @pytest.mark.parametrize("m", [0.2, 0.5, 0.7])
    def test_single_vortex(self, m):
        config = VortexConfiguration.from_points([(m, 0.0)], [1])
        np.testing.assert_allclose(
            forcing(config, 64).velocities[0], single_vortex_velocity(m), atol=1e-10
        )

    def test_case1_co_rotation(self, case1):
        result = forcing(case1, 64)
        np.testing.assert_allclose(
            result.velocities, [[0.0, CASE1_SPEED], [0.0, -CASE1_SPEED]], atol=1e-10
        )
        assert result.separation_at_eval.rho == pytest.approx(0.125)

    def test_antivortex_reverses_motion(self):
        plus = VortexConfiguration.from_points([(0.4, 0.0)], [1])
        minus = VortexConfiguration.from_points([(0.4, 0.0)], [-1])
        np.testing.assert_allclose(
            forcing(minus, 64).velocities, -forcing(plus, 64).velocities, atol=1e-12
        )

    def test_velocity_is_symplectic_gradient(self, dipole):
        result = forcing(dipole, 64)
        d = dipole.degrees[:, None]
        rotated = np.stack([result.grad_w[:, 1], -result.grad_w[:, 0]], axis=-1)
        np.testing.assert_allclose(result.velocities, -d * rotated / math.pi)

    def test_interaction_is_antisymmetric_for_equal_degrees(self, case1):
        grad = interaction_gradient(case1)
        np.testing.assert_allclose(grad, [[-1.0, 0.0], [1.0, 0.0]])

    @pytest.mark.parametrize("angle", [0.4, 2.0, -1.1])
    @pytest.mark.parametrize(
        "points, degrees",
        [
            ([(-0.5, 0.0), (0.5, 0.0)], [1, 1]),
            ([(-0.7, 0.0), (0.7, 0.0)], [-1, 1]),
            ([(0.4, 0.1), (-0.3, 0.2), (0.0, -0.4)], [1, -1, 2]),
        ],
    )
    def test_velocities_rotate_with_configuration(self, points, degrees, angle):
        config = VortexConfiguration.from_points(points, degrees)
        rotated = config.moved_to(rotate(config.positions, angle))
        np.testing.assert_allclose(
            forcing(rotated, 64).velocities,
            rotate(forcing(config, 64).velocities, angle),
            atol=1e-10,
        )

    def test_degenerate_configuration(self):
        config = VortexConfiguration.from_points([(0.2, 0.0), (0.2 + 1e-13, 0.0)], [1, 1])
        with pytest.raises(DegenerateConfigError):
            forcing(config, 8)


class TestIntegrate:
    def test_single_vortex_orbit(self, single_vortex):
        cfg = IntegratorConfig(dt=1e-3, t_max=1.0, n_modes=64)
        record = integrate(single_vortex, cfg)
        assert record.termination is Termination.REACHED_TMAX
        radii = np.hypot(*record.positions[:, 0, :].T)
        np.testing.assert_allclose(radii, 0.5, atol=1e-8)
        angle = np.unwrap(np.arctan2(record.positions[:, 0, 1], record.positions[:, 0, 0]))
        omega = (angle[-1] - angle[0]) / record.times[-1]
        assert omega == pytest.approx(single_vortex_angular_speed(0.5), rel=1e-6)

    def test_single_vortex_matches_closed_form(self, single_vortex):
        record = integrate(single_vortex, IntegratorConfig(dt=1e-3, t_max=0.5, n_modes=64))
        exact = rotate(single_vortex.positions, single_vortex_angular_speed(0.5) * 0.5)
        np.testing.assert_allclose(record.final.positions, exact, atol=1e-9)

    def test_case1_period(self, case1):
        cfg = IntegratorConfig(dt=1e-3, t_max=1.3, n_modes=64)
        record = integrate(case1, cfg)
        times, pos = record.times, record.positions[:, 1, :]
        np.testing.assert_allclose(np.hypot(*pos.T), 0.5, atol=1e-8)
        angle = np.unwrap(np.arctan2(pos[:, 1], pos[:, 0]))
        period = 2.0 * math.pi / abs((angle[-1] - angle[0]) / times[-1])
        assert period == pytest.approx(CASE1_PERIOD, rel=1e-6)
        np.testing.assert_allclose(record.positions[:, 0, :], -pos, atol=1e-10)
        assert trajectory_energy_drift(record) < 1e-8

    def test_dipole_conserves_energy(self, dipole):
        record = integrate(dipole, IntegratorConfig(dt=1e-3, t_max=0.2, n_modes=64))
        assert trajectory_energy_drift(record) < 1e-6
        assert record.termination is Termination.REACHED_TMAX

    @pytest.mark.parametrize("x, y", [(0.0, 0.2), (-0.3, 0.15), (0.2, 0.4)])
    def test_mirror_pair_stays_mirrored(self, x, y):
        config = VortexConfiguration.from_points([(x, y), (x, -y)], [1, -1])
        record = integrate(config, IntegratorConfig(dt=1e-3, t_max=0.05, n_modes=64))
        assert record.termination is Termination.REACHED_TMAX
        upper, lower = record.positions[:, 0, :], record.positions[:, 1, :]
        np.testing.assert_allclose(lower[:, 0], upper[:, 0], atol=1e-12)
        np.testing.assert_allclose(lower[:, 1], -upper[:, 1], atol=1e-12)
        assert np.ptp(upper[:, 0]) > 0.05

    @pytest.mark.parametrize(
        "points",
        [
            [(0.4, 0.1), (-0.3, 0.2), (0.0, -0.4)],
            [(0.4, 0.1), (-0.2, -0.3)],
        ],
    )
    def test_energy_drift_is_fourth_order(self, points):
        config = VortexConfiguration.from_points(points, [1] * len(points))
        dts = np.array([2e-2, 1e-2, 5e-3])
        drifts = [
            trajectory_energy_drift(
                integrate(config, IntegratorConfig(dt=float(dt), t_max=0.5, n_modes=64))
            )
            for dt in dts
        ]
        slope, _ = fit_rate(dts, np.array(drifts), log_x=True)
        assert 3.5 <= slope <= 4.5

    def test_boundary_guard(self):
        config = VortexConfiguration.from_points([(0.0, 0.9), (0.1, 0.9)], [1, -1])
        record = integrate(config, IntegratorConfig(dt=1e-3, t_max=5.0, rho_min=0.02))
        assert record.termination is not Termination.REACHED_TMAX
        assert record.times[-1] < 5.0
        assert all(s.rho > 0.02 for s in record.min_separation)

    def test_close_pair_stops_with_guard(self):
        config = VortexConfiguration.from_points([(-0.05, 0.0), (0.05, 0.0)], [1, -1])
        record = integrate(config, IntegratorConfig(dt=1e-3, t_max=2.0, rho_min=0.0245))
        assert record.termination in {Termination.COLLISION_GUARD, Termination.BOUNDARY_GUARD}

    def test_rejects_initial_state_below_guard(self, case1):
        with pytest.raises(InvalidConfigError):
            integrate(case1, IntegratorConfig(rho_min=0.2))

    def test_rejects_bad_config(self):
        with pytest.raises(InvalidConfigError):
            IntegratorConfig(dt=0.0)
        with pytest.raises(InvalidConfigError):
            IntegratorConfig(dt=1.0, t_max=0.5)
        with pytest.raises(InvalidConfigError):
            IntegratorConfig(oversample=1)

    def test_deterministic(self, case1):
        cfg = IntegratorConfig(dt=1e-2, t_max=0.3, n_modes=32)
        first, second = integrate(case1, cfg), integrate(case1, cfg)
        np.testing.assert_array_equal(first.positions, second.positions)
        np.testing.assert_array_equal(first.renormalized_energy, second.renormalized_energy)


class TestConvergence:
    def test_fit_rate(self):
        x = np.array([1e-2, 5e-3, 2.5e-3])
        slope, intercept = fit_rate(x, 3.0 * x**4, log_x=True)
        assert slope == pytest.approx(4.0)
        assert intercept == pytest.approx(math.log(3.0))
        with pytest.raises(DegenerateFitError):
            fit_rate(x, np.zeros(3), log_x=True)

    def test_rk4_order_against_exact_orbit(self, single_vortex):
        omega = single_vortex_angular_speed(0.5)
        table = convergence_study(
            single_vortex,
            IntegratorConfig(t_max=1.0, n_modes=32),
            dts=[1e-1, 5e-2, 2.5e-2],
            exact=lambda t: rotate(single_vortex.positions, omega * t),
        )
        assert table.parameter == "dt"
        assert 3.7 <= table.slope <= 4.3
        np.testing.assert_allclose(table.effective * np.rint(1.0 / table.effective), 1.0)

    @pytest.mark.slow
    def test_rk4_order_against_reference(self, case1):
        table = convergence_study(
            case1,
            IntegratorConfig(t_max=1.0, n_modes=64),
            dts=[1e-2, 7.5e-3, 5e-3, 2.5e-3, 1e-3],
            reference_dt=1e-5,
        )
        assert 3.7 <= table.slope <= 4.3

    def test_spectral_decay(self):
        config = VortexConfiguration.from_points([(0.3, 0.0), (-0.3, 0.1)], [1, -1])
        table = convergence_study(
            config,
            IntegratorConfig(dt=1e-2, t_max=0.1),
            ns=[2, 4, 6, 8],
            reference_n_modes=64,
        )
        assert table.parameter == "n_modes"
        assert table.slope < -0.5
        assert np.all(np.diff(table.errors) < 0.0)

    @pytest.mark.parametrize("m, ns", [(0.3, [2, 4, 6, 8]), (0.6, [4, 8, 12, 16])])
    def test_co_rotating_pair_decays_geometrically(self, m, ns):
        # Odd boundary modes vanish for this pair; the error falls like m^(2n).
        pair = VortexConfiguration.from_points([(m, 0.0), (-m, 0.0)], [1, 1])
        table = convergence_study(
            pair, IntegratorConfig(dt=1e-2, t_max=0.1), ns=ns, reference_n_modes=256
        )
        assert np.all(np.diff(table.errors) < 0.0)
        assert 2.5 * math.log(m) < table.slope < 1.5 * math.log(m)

    @pytest.mark.parametrize("m", [0.3, 0.6])
    def test_co_rotating_pair_reaches_round_off(self, m):
        pair = VortexConfiguration.from_points([(m, 0.0), (-m, 0.0)], [1, 1])
        table = convergence_study(
            pair,
            IntegratorConfig(dt=1e-2, t_max=0.1),
            ns=[4, 8, 16, 32, 64],
            reference_n_modes=256,
        )
        floor = 1e-12
        for coarse, fine in zip(table.errors, table.errors[1:]):
            assert fine < coarse or fine < floor
        assert table.errors[0] > floor
        assert table.errors[-1] < floor

    def test_prefactor_grows_towards_the_boundary(self):
        tables = {
            m: convergence_study(
                VortexConfiguration.from_points([(m, 0.0), (-m, 0.0)], [1, 1]),
                IntegratorConfig(dt=1e-2, t_max=0.1),
                ns=[4, 8, 12, 16],
                reference_n_modes=256,
            )
            for m in (0.6, 0.9)
        }
        assert tables[0.9].intercept > tables[0.6].intercept
        assert np.all(tables[0.9].errors > tables[0.6].errors)
        assert tables[0.6].slope < tables[0.9].slope < 0.0

    def test_rejects_invalid_sweeps(self, case1):
        base = IntegratorConfig(t_max=0.1)
        with pytest.raises(InvalidParamsError):
            convergence_study(case1, base)
        with pytest.raises(InvalidParamsError):
            convergence_study(case1, base, dts=[1e-2, 5e-3], reference_dt=1e-2)
        with pytest.raises(InvalidParamsError):
            convergence_study(case1, base, ns=[4, 8], reference_n_modes=8)

    def test_guard_stops_study(self):
        config = VortexConfiguration.from_points([(0.0, 0.9), (0.1, 0.9)], [1, -1])
        with pytest.raises(GuardTriggeredError):
            convergence_study(
                config,
                IntegratorConfig(t_max=5.0, rho_min=0.02, n_modes=16),
                dts=[1e-2, 5e-3],
                reference_dt=1e-3,
            )
