import math

import numpy as np
import pytest

from vortexlab.cli.metrics import (
    Metric,
    best_phase,
    compare,
    epsilon_regression,
    lp_norm,
    regression_comments,
)
from vortexlab.core import ComplexField, PolarGrid, VortexConfiguration
from vortexlab.errors import DegenerateFitError, GridMismatchError, InvalidParamsError
from vortexlab.fields import (
    build_reconstruction,
    canonical_map,
    reconstruct_psi,
    supercurrent,
    well_prepared_gap,
)
from vortexlab.profile import compute_gamma


def _field(grid, seed):
    rng = np.random.default_rng(seed)
    return ComplexField(
        grid=grid, values=rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    )


class TestLpNorm:
    def test_identical_fields(self, small_grid):
        f = _field(small_grid, 0)
        assert lp_norm(f, f, 2.0) == 0.0

    def test_constant_field(self, small_grid):
        f = ComplexField(grid=small_grid, values=np.full(small_grid.shape, 3.0 + 4.0j))
        assert lp_norm(f, None, 2.0) == pytest.approx(5.0 * math.sqrt(math.pi), rel=1e-12)

    def test_centered_vortex_supercurrent(self, medium_grid):
        u = canonical_map(VortexConfiguration.from_points([(0.0, 0.0)], [1]), 8, medium_grid)
        norm = lp_norm(supercurrent(u), None, 4.0 / 3.0)
        assert norm == pytest.approx((3.0 * math.pi) ** 0.75, rel=2e-2)

    @pytest.mark.slow
    def test_centered_vortex_supercurrent_fine(self):
        grid = PolarGrid(n_r=256, n_theta=512)
        u = canonical_map(VortexConfiguration.from_points([(0.0, 0.0)], [1]), 8, grid)
        norm = lp_norm(supercurrent(u), None, 4.0 / 3.0)
        assert norm == pytest.approx((3.0 * math.pi) ** 0.75, rel=1e-2)

    @pytest.mark.parametrize("p", [1.0, 4.0 / 3.0, 2.0])
    def test_triangle_inequality_and_homogeneity(self, small_grid, p):
        f, g, h = (_field(small_grid, seed) for seed in (1, 2, 3))
        assert lp_norm(f, h, p) <= lp_norm(f, g, p) + lp_norm(g, h, p)
        doubled = f.with_values(2.0 * f.values)
        assert lp_norm(doubled, None, p) == pytest.approx(2.0 * lp_norm(f, None, p))

    def test_rejects_small_p(self, small_grid):
        with pytest.raises(InvalidParamsError):
            lp_norm(_field(small_grid, 0), None, 0.5)

    def test_rejects_mismatch(self, small_grid, medium_grid):
        f = _field(small_grid, 0)
        with pytest.raises(GridMismatchError):
            lp_norm(f, _field(medium_grid, 0), 2.0)
        with pytest.raises(GridMismatchError):
            lp_norm(supercurrent(f), f, 2.0)


class TestCompare:
    @pytest.mark.parametrize("metric", list(Metric))
    def test_self_distance_is_zero(self, small_grid, metric):
        f = _field(small_grid, 4)
        assert compare(f, f, metric) == 0.0

    def test_mod_phase_removes_global_phase(self, case1, small_grid):
        u = canonical_map(case1, 16, small_grid)
        rotated = u.with_values(u.values * np.exp(0.7j))
        assert best_phase(rotated, u) == pytest.approx(0.7)
        assert compare(u, rotated, Metric.L2) > 1.0
        assert compare(u, rotated, Metric.L2, mod_phase=True) == pytest.approx(0.0, abs=1e-12)
        assert compare(u, rotated, Metric.L43_SUPERCURRENT) == pytest.approx(0.0, abs=1e-10)

    def test_relative_scaling(self, small_grid):
        f, g = _field(small_grid, 5), _field(small_grid, 6)
        absolute = compare(f, g, "l2")
        assert compare(f, g, "l2", relative=True) == pytest.approx(absolute / lp_norm(f, None, 2.0))

    def test_relative_to_zero_field(self, small_grid):
        zero = ComplexField(grid=small_grid, values=np.zeros(small_grid.shape))
        with pytest.raises(InvalidParamsError):
            compare(zero, _field(small_grid, 7), Metric.L2_GRADIENT, relative=True)

    def test_rejects_unknown_metric(self, small_grid):
        f = _field(small_grid, 0)
        with pytest.raises(ValueError):
            compare(f, f, "h1")

    def test_error_shrinks_with_epsilon(self, case1, small_grid):
        u = canonical_map(case1, 32, small_grid)
        specs = [
            build_reconstruction(case1, eps, small_grid, n_modes=32, mesh_size=800)
            for eps in (0.1, 0.05)
        ]
        errors = [compare(u, reconstruct_psi(spec), Metric.L2) for spec in specs]
        assert errors[1] < errors[0]


class TestEpsilonRegression:
    def test_square_root_law(self):
        eps = np.array([0.1, 0.07, 0.05, 0.03])
        fit = epsilon_regression(zip(eps, np.sqrt(eps)))
        assert fit.slope == pytest.approx(0.5)
        assert fit.intercept == pytest.approx(0.0, abs=1e-12)
        assert fit.residual == pytest.approx(0.0, abs=1e-12)

    def test_linear_law_with_constant(self):
        eps = [0.1, 0.05, 0.02]
        fit = epsilon_regression([(e, 3.0 * e) for e in eps])
        assert fit.slope == pytest.approx(1.0)
        assert fit.intercept == pytest.approx(math.log(3.0))

    @pytest.mark.parametrize(
        "points",
        [
            [(0.1, 1.0), (0.05, 0.5)],
            [(0.1, 1.0), (0.05, 0.0), (0.02, 0.1)],
            [(0.1, 1.0), (0.1, 0.5), (0.1, 0.2)],
        ],
    )
    def test_degenerate(self, points):
        with pytest.raises(DegenerateFitError):
            epsilon_regression(points)
        assert regression_comments("l2_", points) == []

    def test_comments(self):
        comments = dict(regression_comments("l43_", [(0.1, 0.1), (0.05, 0.05), (0.02, 0.02)]))
        assert set(comments) == {"l43_slope", "l43_intercept", "l43_residual"}
        assert comments["l43_slope"] == pytest.approx(1.0)


DESK_EPSILONS = (0.1, 0.07, 0.05, 0.03)


@pytest.fixture(scope="module")
def desk_sweep():
    """Canonical-map errors and energy gaps of case 1 on the 256×512 grid."""
    config = VortexConfiguration.from_points([(-0.5, 0.0), (0.5, 0.0)], [1, 1])
    grid = PolarGrid(n_r=256, n_theta=512)
    u = canonical_map(config, 64, grid)
    gamma = compute_gamma().gamma
    rows = []
    for eps in DESK_EPSILONS:
        spec = build_reconstruction(config, eps, grid, r0=0.3, n_modes=64)
        psi = reconstruct_psi(spec)
        rows.append(
            (
                eps,
                compare(u, psi, Metric.L2),
                compare(u, psi, Metric.L43_SUPERCURRENT),
                well_prepared_gap(spec, gamma, psi),
            )
        )
    return rows


@pytest.mark.slow
class TestDeskScaleEpsilonLaws:
    def test_l2_distance_is_linear_in_epsilon(self, desk_sweep):
        fit = epsilon_regression([(eps, l2) for eps, l2, _, _ in desk_sweep])
        assert 0.9 <= fit.slope <= 1.1

    def test_supercurrent_distance_is_square_root_in_epsilon(self, desk_sweep):
        fit = epsilon_regression([(eps, l43) for eps, _, l43, _ in desk_sweep])
        assert 0.4 <= fit.slope <= 0.6

    def test_energy_gap_shrinks(self, desk_sweep):
        gaps = {eps: abs(gap) for eps, _, _, gap in desk_sweep}
        assert gaps[0.05] < 0.25 * gaps[0.1]
        assert gaps[0.03] < 0.5 * gaps[0.1]
