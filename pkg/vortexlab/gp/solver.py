"""Strang-splitting reference solver for ``i∂tψ = Δψ + ε⁻²(1 − |ψ|²)ψ`` on the disk.

The nonlinear sub-flow is the exact phase rotation
``ψ ↦ ψ·exp(−iτ(1 − |ψ|²)/ε²)``.  The linear sub-flow ``i∂tψ = Δψ`` is
advanced by Crank-Nicolson with a finite-volume polar Laplacian:

- radial fluxes through cell faces ``r_{i±1/2}``; the face at ``r = 0`` has
  zero area,
- a ghost ring equal to the outermost ring gives ``∂_r ψ = 0`` at ``r = 1``,
- second differences in ``θ``, diagonalized by an angular DFT.

Pole closure: ring ``i`` only carries the angular modes
``|m| ≤ max(1, ⌊π r_i / Δr⌋)``, so the innermost ring holds its angular mean
and the ``m = ±1`` pair and no ring is resolved more finely in ``θ`` than in
``r``.  The unresolved (ring, mode) unknowns are removed from the operator and
see their resolved neighbours as zero Dirichlet data; every step ends with a
projection onto the resolved modes.

The operator is symmetric for the weights ``r_i Δr Δθ``, so the discrete mass
``Σ w|ψ|²`` of a resolved state is conserved by every linear step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import fft, sparse
from scipy.sparse.linalg import splu

from vortexlab.config import DEFAULT_EPSILON, DEFAULT_GP_DT, DEFAULT_SNAPSHOT_STRIDE
from vortexlab.core.model import ComplexField, PolarGrid
from vortexlab.errors import GridMismatchError, InvalidConfigError, LinearSolveError
from vortexlab.fields.diagnostics import energy, mass
from vortexlab.gp.localize import DetectedVortices, localize_vortices
from vortexlab.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class GPConfig:
    """Parameters of a reference run.

    Crank-Nicolson is unconditionally stable; ``dt`` controls accuracy only.
    """

    grid: PolarGrid
    epsilon: float = DEFAULT_EPSILON
    dt: float = DEFAULT_GP_DT
    t_max: float = 1.0
    snapshot_stride: int = DEFAULT_SNAPSHOT_STRIDE

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise InvalidConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.dt > 0.0 and self.t_max > 0.0):
            raise InvalidConfigError("dt and t_max must be positive")
        if not self.dt <= self.t_max:
            raise InvalidConfigError(f"dt={self.dt} exceeds t_max={self.t_max}")
        if self.snapshot_stride < 1:
            raise InvalidConfigError(f"snapshot_stride must be >= 1, got {self.snapshot_stride}")

    @property
    def n_steps(self) -> int:
        return max(1, round(self.t_max / self.dt))


# ── Linear operator ─────────────────────────────────────────────────────────


def angular_cutoff(grid: PolarGrid) -> np.ndarray:
    """Largest angular mode ``|m|`` carried by each ring."""
    cutoff = np.maximum(1, np.floor(np.pi * grid.r / grid.dr)).astype(int)
    return np.minimum(cutoff, grid.n_theta // 2)


def _resolved_modes(grid: PolarGrid) -> np.ndarray:
    """Boolean ``(n_r, n_theta)`` mask over (ring, DFT index)."""
    modes = np.abs(fft.fftfreq(grid.n_theta, d=1.0 / grid.n_theta))
    return modes[None, :] <= angular_cutoff(grid)[:, None]


class PolarLaplacian:
    """Five-point finite-volume Laplacian on a cell-centered :class:`PolarGrid`,
    restricted to the resolved angular modes of every ring."""

    def __init__(self, grid: PolarGrid) -> None:
        self.grid = grid
        r, dr = grid.r, grid.dr
        faces = np.arange(grid.n_r + 1) * dr
        faces[-1] = 0.0
        self.lower = faces[:-1] / (r * dr**2)
        self.upper = faces[1:] / (r * dr**2)
        self.diag = -(self.lower + self.upper)
        self.inv_r2 = 1.0 / r**2
        modes = fft.fftfreq(grid.n_theta, d=1.0 / grid.n_theta)
        self.angular_eigenvalues = 4.0 * np.sin(0.5 * modes * grid.dtheta) ** 2 / grid.dtheta**2
        self.resolved = _resolved_modes(grid)

    def _check(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values)
        if values.shape != self.grid.shape:
            raise GridMismatchError(f"expected shape {self.grid.shape}, got {values.shape}")
        return values

    def project(self, values: np.ndarray) -> np.ndarray:
        """Drop the unresolved angular modes of every ring."""
        values = self._check(values)
        if self.resolved.all():
            return values
        coeffs = fft.fft(values, axis=1)
        coeffs[~self.resolved] = 0.0
        return fft.ifft(coeffs, axis=1)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """``Δψ`` of the resolved part of *values*, evaluated in physical space."""
        values = self.project(values)
        radial = self.diag[:, None] * values
        radial[1:] += self.lower[1:, None] * values[:-1]
        radial[:-1] += self.upper[:-1, None] * values[1:]
        angular = np.roll(values, -1, axis=1) - 2.0 * values + np.roll(values, 1, axis=1)
        return self.project(radial + angular * (self.inv_r2[:, None] / self.grid.dtheta**2))

    def mode_matrix(self) -> sparse.csc_matrix:
        """Block-diagonal operator acting on angular DFT coefficients.

        Unknowns are ordered mode-major: index ``m * n_r + i``.  Rows and
        columns of unresolved unknowns are zero.
        """
        n_r, n_theta = self.grid.n_r, self.grid.n_theta
        active = self.resolved.T.reshape(-1)
        main = np.tile(self.diag, n_theta) - np.repeat(self.angular_eigenvalues, n_r) * np.tile(
            self.inv_r2, n_theta
        )
        sub = np.tile(np.append(self.lower[1:], 0.0), n_theta)[:-1]
        sup = np.tile(np.append(self.upper[:-1], 0.0), n_theta)[:-1]
        linked = active[:-1] & active[1:]
        main = np.where(active, main, 0.0)
        sub = np.where(linked, sub, 0.0)
        sup = np.where(linked, sup, 0.0)
        return sparse.diags([sub, main, sup], [-1, 0, 1], format="csc")


class CrankNicolson:
    """``(I + i dt/2 Δ) ψ⁺ = (I − i dt/2 Δ) ψ`` solved per angular mode.

    The result carries only resolved modes.
    """

    def __init__(self, laplacian: PolarLaplacian, dt: float) -> None:
        self.grid = laplacian.grid
        self.laplacian = laplacian
        self._inactive = ~laplacian.resolved.T.reshape(-1)
        operator = laplacian.mode_matrix()
        identity = sparse.identity(operator.shape[0], dtype=complex, format="csc")
        self._explicit = (identity - 0.5j * dt * operator).tocsr()
        try:
            self._factor = splu((identity + 0.5j * dt * operator).tocsc())
        except RuntimeError as exc:
            raise LinearSolveError(f"Crank-Nicolson factorization failed: {exc}") from exc

    def __call__(self, values: np.ndarray) -> np.ndarray:
        n_r, n_theta = self.grid.shape
        coeffs = fft.fft(values, axis=1).T.reshape(-1)
        coeffs[self._inactive] = 0.0
        solution = self._factor.solve(self._explicit @ coeffs)
        if not np.all(np.isfinite(solution)):
            raise LinearSolveError("Crank-Nicolson solve produced non-finite values")
        return fft.ifft(solution.reshape(n_theta, n_r).T, axis=1)


@lru_cache(maxsize=8)
def _propagator(grid: PolarGrid, dt: float) -> CrankNicolson:
    logger.debug("Factorizing Crank-Nicolson operator on %dx%d grid, dt=%g", *grid.shape, dt)
    return CrankNicolson(PolarLaplacian(grid), dt)


def polar_filter(state: ComplexField) -> ComplexField:
    """Project *state* onto the angular modes the solver resolves.

    Runs start from the filtered initial field; filtering a smooth field
    changes it by the spectral tail beyond each ring's cutoff.
    """
    return state.with_values(PolarLaplacian(state.grid).project(state.values))


# ── Splitting ───────────────────────────────────────────────────────────────


def nonlinear_flow(values: np.ndarray, tau: float, epsilon: float) -> np.ndarray:
    """Exact flow of ``i∂tψ = ε⁻²(1 − |ψ|²)ψ`` over time *tau*; keeps ``|ψ|``."""
    return values * np.exp(-1j * tau * (1.0 - np.abs(values) ** 2) / epsilon**2)


def _strang(values: np.ndarray, cfg: GPConfig, linear: CrankNicolson) -> np.ndarray:
    half = 0.5 * cfg.dt
    values = nonlinear_flow(values, half, cfg.epsilon)
    values = linear(values)
    return linear.laplacian.project(nonlinear_flow(values, half, cfg.epsilon))


def gp_step(state: ComplexField, cfg: GPConfig) -> ComplexField:
    """Advance *state* by one Strang step ``N(dt/2) L(dt) N(dt/2)``.

    The result is projected onto the resolved angular modes (see
    :func:`polar_filter`).

    Raises
    ------
    GridMismatchError
        If *state* is not sampled on ``cfg.grid``.
    LinearSolveError
        If the Crank-Nicolson factorization or solve breaks down.
    """
    if state.grid != cfg.grid:
        raise GridMismatchError("state and GP configuration use different grids")
    return state.with_values(_strang(state.values, cfg, _propagator(cfg.grid, cfg.dt)))


# ── Runs ────────────────────────────────────────────────────────────────────


SnapshotCallback = Callable[[int, float, ComplexField, DetectedVortices], None]


@dataclass(frozen=True, eq=False)
class GPRun:
    """Snapshot series of a reference run.

    ``snapshots`` is empty when the run was started with
    ``keep_snapshots=False``; the scalar series are always filled.
    """

    steps: np.ndarray
    times: np.ndarray
    masses: np.ndarray
    energies: np.ndarray
    vortices: Tuple[DetectedVortices, ...]
    snapshots: Tuple[ComplexField, ...]

    @property
    def energy_drift(self) -> float:
        """``|E(T) − E(0)| / |E(0)|``."""
        return float(abs(self.energies[-1] - self.energies[0]) / abs(self.energies[0]))

    @property
    def mass_drift(self) -> float:
        return float(abs(self.masses[-1] - self.masses[0]) / abs(self.masses[0]))


def run_gp(
    initial: ComplexField,
    cfg: GPConfig,
    *,
    keep_snapshots: bool = True,
    on_snapshot: Optional[SnapshotCallback] = None,
) -> GPRun:
    """Run the reference solver to ``n_steps * dt``.

    A snapshot (mass, energy, detected vortices, optionally the field) is
    taken at step 0, every ``snapshot_stride`` steps and at the final step.
    Step 0 is the initial field after :func:`polar_filter`; mass and energy
    drifts are measured from it.
    """
    if initial.grid != cfg.grid:
        raise GridMismatchError("initial field and GP configuration use different grids")
    linear = _propagator(cfg.grid, cfg.dt)
    n_steps = cfg.n_steps
    steps: List[int] = []
    times: List[float] = []
    masses: List[float] = []
    energies: List[float] = []
    vortices: List[DetectedVortices] = []
    snapshots: List[ComplexField] = []

    def snapshot(step: int, state: ComplexField) -> None:
        t = step * cfg.dt
        detected = localize_vortices(state)
        steps.append(step)
        times.append(t)
        masses.append(mass(state))
        energies.append(energy(state, cfg.epsilon))
        vortices.append(detected)
        if keep_snapshots:
            snapshots.append(state)
        if on_snapshot is not None:
            on_snapshot(step, t, state, detected)
        logger.info(
            "GP step %d/%d t=%.6g mass=%.12g energy=%.12g vortices=%d",
            step, n_steps, t, masses[-1], energies[-1], len(detected),
        )

    logger.info(
        "GP run on %dx%d grid: epsilon=%g dt=%g steps=%d",
        cfg.grid.n_r, cfg.grid.n_theta, cfg.epsilon, cfg.dt, n_steps,
    )
    start = initial.with_values(linear.laplacian.project(initial.values))
    logger.debug("Polar filter changed the initial mass by %.3e", mass(initial) - mass(start))
    values = start.values
    snapshot(0, start)
    for step in range(1, n_steps + 1):
        values = _strang(values, cfg, linear)
        if step % cfg.snapshot_stride == 0 or step == n_steps:
            snapshot(step, start.with_values(values))

    return GPRun(
        steps=np.array(steps),
        times=np.array(times),
        masses=np.array(masses),
        energies=np.array(energies),
        vortices=tuple(vortices),
        snapshots=tuple(snapshots),
    )
