import math

import numpy as np
import pytest

from vortexlab.core import (
    ComplexField,
    PolarGrid,
    Separation,
    Termination,
    TrajectoryRecord,
    VectorField,
    VortexConfiguration,
    dirac_w11_distance,
    separation,
    separation_of,
)
from vortexlab.errors import InvalidConfigError, PairingInvalidError


class TestVortexConfiguration:
    def test_arrays_are_read_only(self, case1):
        with pytest.raises(ValueError):
            case1.positions[0, 0] = 0.1
        with pytest.raises(ValueError):
            case1.degrees[0] = -1

    @pytest.mark.parametrize(
        ("points", "degrees"),
        [
            ([(0.0, 0.0)], [2]),
            ([(0.0, 0.0)], [0]),
            ([(1.0, 0.0)], [1]),
            ([(0.8, 0.8)], [1]),
            ([(0.1, 0.1), (0.1, 0.1)], [1, -1]),
            ([(0.1, 0.1), (0.2, 0.1)], [1]),
            ([(math.nan, 0.0)], [1]),
        ],
    )
    def test_rejects_invalid(self, points, degrees):
        with pytest.raises(InvalidConfigError):
            VortexConfiguration.from_points(points, degrees)

    def test_empty_configuration(self):
        empty = VortexConfiguration.from_points([], [])
        assert empty.n == 0
        assert empty.total_degree == 0

    def test_moved_to_keeps_degrees(self, case1):
        moved = case1.moved_to([(0.0, 0.4), (0.0, -0.4)])
        np.testing.assert_array_equal(moved.degrees, case1.degrees)
        np.testing.assert_allclose(moved.complex_positions, [0.4j, -0.4j])


class TestSeparation:
    def test_case1_is_boundary_limited(self, case1):
        sep = separation(case1)
        assert sep.rho == pytest.approx(0.125, abs=1e-15)
        assert sep.limited_by == "boundary"

    def test_nine_vortex_grid_is_pair_limited(self):
        points = [(x, y) for x in (-0.3, 0.0, 0.3) for y in (-0.3, 0.0, 0.3)]
        sep = separation(VortexConfiguration.from_points(points, [1] * 9))
        assert sep.rho == pytest.approx(0.075, abs=1e-15)
        assert sep.limited_by == "pair"

    def test_empty_is_infinite(self):
        sep = separation(VortexConfiguration.from_points([], []))
        assert sep == Separation(rho=math.inf, limited_by="none")
        assert not sep.is_degenerate

    def test_outside_point_is_negative(self):
        sep = separation_of(np.array([[1.2, 0.0], [0.0, 0.0]]))
        assert sep.rho < 0.0
        assert sep.is_degenerate


class TestDiracDistance:
    def test_identical_is_zero(self, case1):
        assert dirac_w11_distance(case1, case1) == 0.0

    def test_small_displacement(self, case1):
        moved = case1.moved_to(case1.positions + np.array([[0.01, 0.0], [0.0, 0.02]]))
        assert dirac_w11_distance(case1, moved) == pytest.approx(math.pi * 0.03, rel=1e-12)

    def test_rejects_far_displacement(self, case1):
        moved = case1.moved_to(case1.positions + np.array([[0.2, 0.0], [0.0, 0.0]]))
        with pytest.raises(PairingInvalidError):
            dirac_w11_distance(case1, moved)

    def test_rejects_different_degrees(self, case1):
        other = VortexConfiguration(positions=case1.positions, degrees=[1, -1])
        with pytest.raises(PairingInvalidError):
            dirac_w11_distance(case1, other)


class TestPolarGrid:
    def test_weights_integrate_area(self):
        grid = PolarGrid(n_r=64, n_theta=128)
        assert grid.integrate(np.ones(grid.shape)) == pytest.approx(math.pi, abs=1e-12)

    def test_second_moment_is_second_order(self):
        for n_r in (32, 64, 128):
            grid = PolarGrid(n_r=n_r, n_theta=64)
            error = abs(grid.integrate(grid.radius**2) - math.pi / 2) / (math.pi / 2)
            assert error <= 1.0 / n_r**2

    @pytest.mark.parametrize(("n_r", "n_theta"), [(1, 8), (8, 7), (8, 2)])
    def test_rejects_bad_sizes(self, n_r, n_theta):
        with pytest.raises(InvalidConfigError):
            PolarGrid(n_r=n_r, n_theta=n_theta)

    def test_node_layout(self, small_grid):
        assert small_grid.points.shape == (64, 128, 2)
        np.testing.assert_allclose(np.abs(small_grid.complex_points), small_grid.radius)
        assert small_grid.r[0] == pytest.approx(0.5 / 64)
        assert np.all(small_grid.cell_diameter > 0.0)

    def test_grids_compare_by_size(self):
        assert PolarGrid(8, 16) == PolarGrid(8, 16)
        assert hash(PolarGrid(8, 16)) == hash(PolarGrid(8, 16))


class TestFields:
    def test_complex_field_reshapes_flat_samples(self, small_grid):
        field = ComplexField(grid=small_grid, values=np.ones(small_grid.size))
        assert field.values.shape == small_grid.shape
        assert not field.values.flags.writeable

    def test_complex_field_rejects_wrong_size(self, small_grid):
        with pytest.raises(InvalidConfigError):
            ComplexField(grid=small_grid, values=np.ones(10))

    def test_vector_field_magnitude(self, small_grid):
        values = np.zeros((*small_grid.shape, 2))
        values[..., 0], values[..., 1] = 3.0, 4.0
        np.testing.assert_allclose(VectorField(small_grid, values).magnitude, 5.0)


class TestTrajectoryRecord:
    def _record(self, config, times):
        return TrajectoryRecord(
            times=times,
            states=tuple(config for _ in times),
            renormalized_energy=np.zeros(len(times)),
            min_separation=tuple(separation(config) for _ in times),
            termination="ReachedTmax",
            dt=0.1,
            n_modes=8,
        )

    def test_state_lookup(self, case1):
        record = self._record(case1, [0.0, 0.1, 0.2])
        assert record.termination is Termination.REACHED_TMAX
        assert record.state_at(0.1) is record.states[1]
        assert record.positions.shape == (3, 2, 2)
        assert record.rho_t == pytest.approx(0.125)
        with pytest.raises(InvalidConfigError):
            record.state_at(0.5)

    def test_rejects_unsorted_times(self, case1):
        with pytest.raises(InvalidConfigError):
            self._record(case1, [0.0, 0.2, 0.1])

    def test_rejects_changing_degrees(self, case1):
        flipped = VortexConfiguration(positions=case1.positions, degrees=[1, -1])
        with pytest.raises(InvalidConfigError):
            TrajectoryRecord(
                times=[0.0, 0.1],
                states=(case1, flipped),
                renormalized_energy=[0.0, 0.0],
                min_separation=(separation(case1), separation(flipped)),
                termination=Termination.REACHED_TMAX,
                dt=0.1,
                n_modes=8,
            )
