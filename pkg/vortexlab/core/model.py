"""Domain types shared by every module.

Vortex configurations, the separation functional, the polar grid over the
unit disk and the sampled fields that live on it.  All types are frozen
dataclasses whose numpy arrays are made read-only at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence, Tuple

import numpy as np

from vortexlab.errors import InvalidConfigError, PairingInvalidError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


# ── Vortex configurations ───────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class VortexConfiguration:
    """Positions of N vortices inside the open unit disk with degrees ±1.

    ``positions`` has shape ``(N, 2)``; ``degrees`` has shape ``(N,)``.
    """

    positions: np.ndarray
    degrees: np.ndarray

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=float).reshape(-1, 2)
        degrees = np.array(self.degrees, dtype=int).reshape(-1)
        if degrees.shape[0] != positions.shape[0]:
            raise InvalidConfigError(
                f"{positions.shape[0]} positions but {degrees.shape[0]} degrees"
            )
        if not np.all(np.isfinite(positions)):
            raise InvalidConfigError("vortex positions must be finite")
        if np.any((degrees != 1) & (degrees != -1)):
            raise InvalidConfigError(f"degrees must be +1 or -1, got {degrees.tolist()}")
        radii = np.hypot(positions[:, 0], positions[:, 1])
        if np.any(radii >= 1.0):
            raise InvalidConfigError("every vortex must lie strictly inside the unit disk")
        if positions.shape[0] > 1 and np.min(_pair_distances(positions)) == 0.0:
            raise InvalidConfigError("vortex positions must be pairwise distinct")
        object.__setattr__(self, "positions", _frozen(positions))
        object.__setattr__(self, "degrees", _frozen(degrees))

    @classmethod
    def from_points(
        cls, points: Iterable[Sequence[float]], degrees: Iterable[int]
    ) -> VortexConfiguration:
        """Build a configuration from ``[(x, y), ...]`` and ``[d, ...]``."""
        return cls(positions=np.array(list(points), dtype=float), degrees=np.array(list(degrees)))

    @property
    def n(self) -> int:
        return int(self.degrees.shape[0])

    @property
    def complex_positions(self) -> np.ndarray:
        return self.positions[:, 0] + 1j * self.positions[:, 1]

    @property
    def total_degree(self) -> int:
        return int(np.sum(self.degrees))

    def moved_to(self, positions: np.ndarray) -> VortexConfiguration:
        """Return a configuration with the same degrees at new *positions*."""
        return VortexConfiguration(positions=np.array(positions, dtype=float), degrees=self.degrees)


def _pair_distances(positions: np.ndarray) -> np.ndarray:
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    iu = np.triu_indices(positions.shape[0], k=1)
    return dist[iu]


# ── Separation ──────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Separation:
    """Quarter of the minimal pairwise / boundary distance of a configuration.

    ``limited_by`` names the term attaining the minimum: ``"pair"``,
    ``"boundary"`` or ``"none"`` for an empty configuration.
    """

    rho: float
    limited_by: str = "none"

    @property
    def is_degenerate(self) -> bool:
        return not self.rho > 0.0


def separation_of(positions: np.ndarray) -> Separation:
    """Separation of raw positions, which may lie outside the disk.

    Used by the integrator on trial RK4 stages; a position outside the disk
    yields a negative boundary term and therefore ``rho < 0``.
    """
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if positions.shape[0] == 0:
        return Separation(rho=math.inf)
    boundary = float(np.min(1.0 - np.hypot(positions[:, 0], positions[:, 1])))
    if positions.shape[0] > 1:
        pair = float(np.min(_pair_distances(positions)))
        if pair < boundary:
            return Separation(rho=0.25 * pair, limited_by="pair")
    return Separation(rho=0.25 * boundary, limited_by="boundary")


def separation(config: VortexConfiguration) -> Separation:
    """ρ(a) = ¼·min(pairwise distances, distances to the unit circle)."""
    return separation_of(config.positions)


def dirac_w11_distance(a: VortexConfiguration, b: VortexConfiguration) -> float:
    """Minimal-connection distance π Σ_j |a_j − b_j| between paired configurations.

    Raises
    ------
    PairingInvalidError
        If the degrees differ or some displacement exceeds ρ(a); the closed
        formula is then no longer the dual-Lipschitz norm.
    """
    if a.n != b.n or not np.array_equal(a.degrees, b.degrees):
        raise PairingInvalidError("configurations must carry identical degrees")
    if a.n == 0:
        return 0.0
    disp = np.hypot(*(a.positions - b.positions).T)
    rho = separation(a).rho
    worst = int(np.argmax(disp))
    if disp[worst] > rho:
        raise PairingInvalidError(
            f"vortex {worst} moved by {disp[worst]:.6g} which exceeds rho(a) = {rho:.6g}"
        )
    return float(math.pi * np.sum(np.abs(a.degrees) * disp))


# ── Polar grid ──────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class PolarGrid:
    """Cell-centered polar grid over the unit disk.

    Radii ``r_i = (i + 1/2) / n_r`` and angles ``θ_k = 2πk / n_theta``;
    arrays are laid out radial-major with shape ``(n_r, n_theta)``.
    """

    n_r: int
    n_theta: int

    def __post_init__(self) -> None:
        if self.n_r < 2:
            raise InvalidConfigError(f"n_r must be >= 2, got {self.n_r}")
        if self.n_theta < 4 or self.n_theta % 2:
            raise InvalidConfigError(f"n_theta must be even and >= 4, got {self.n_theta}")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_r, self.n_theta)

    @property
    def size(self) -> int:
        return self.n_r * self.n_theta

    @property
    def dr(self) -> float:
        return 1.0 / self.n_r

    @property
    def dtheta(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @cached_property
    def r(self) -> np.ndarray:
        return _frozen((np.arange(self.n_r) + 0.5) / self.n_r)

    @cached_property
    def theta(self) -> np.ndarray:
        return _frozen(np.arange(self.n_theta) * self.dtheta)

    @cached_property
    def radius(self) -> np.ndarray:
        """Radius of every node, shape ``(n_r, n_theta)``."""
        return _frozen(np.repeat(self.r[:, None], self.n_theta, axis=1))

    @cached_property
    def angle(self) -> np.ndarray:
        """Angle of every node, shape ``(n_r, n_theta)``."""
        return _frozen(np.repeat(self.theta[None, :], self.n_r, axis=0))

    @cached_property
    def points(self) -> np.ndarray:
        """Cartesian node coordinates, shape ``(n_r, n_theta, 2)``."""
        pts = np.stack(
            [self.radius * np.cos(self.angle), self.radius * np.sin(self.angle)], axis=-1
        )
        return _frozen(pts)

    @cached_property
    def complex_points(self) -> np.ndarray:
        return _frozen(self.radius * np.exp(1j * self.angle))

    @cached_property
    def weights(self) -> np.ndarray:
        """Midpoint quadrature weights ``r_i Δr Δθ``; they sum to π."""
        return _frozen(self.radius * self.dr * self.dtheta)

    @cached_property
    def cell_diameter(self) -> np.ndarray:
        """Diagonal of the polar cell around every node."""
        return _frozen(np.hypot(self.dr, self.radius * self.dtheta))

    def integrate(self, values: np.ndarray) -> float:
        """Quadrature of nodal *values* over the disk."""
        return float(np.sum(self.weights * values))


# ── Sampled fields ──────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples on a :class:`PolarGrid`, shape ``(n_r, n_theta)``."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            if values.size != self.grid.size:
                raise InvalidConfigError(
                    f"field has {values.size} samples, grid needs {self.grid.size}"
                )
            values = values.reshape(self.grid.shape)
        if not np.all(np.isfinite(values)):
            raise InvalidConfigError("field samples must be finite")
        object.__setattr__(self, "values", _frozen(values))

    def with_values(self, values: np.ndarray) -> ComplexField:
        return ComplexField(grid=self.grid, values=values)


@dataclass(frozen=True, eq=False)
class VectorField:
    """Cartesian 2-vectors on a :class:`PolarGrid`, shape ``(n_r, n_theta, 2)``."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.shape != (*self.grid.shape, 2):
            if values.size != 2 * self.grid.size:
                raise InvalidConfigError(
                    f"vector field has {values.size} entries, grid needs {2 * self.grid.size}"
                )
            values = values.reshape(*self.grid.shape, 2)
        if not np.all(np.isfinite(values)):
            raise InvalidConfigError("vector field entries must be finite")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def magnitude(self) -> np.ndarray:
        return np.hypot(self.values[..., 0], self.values[..., 1])


# ── Trajectories ────────────────────────────────────────────────────────────


class Termination(str, Enum):
    """Why an integration stopped."""

    REACHED_TMAX = "ReachedTmax"
    COLLISION_GUARD = "CollisionGuard"
    BOUNDARY_GUARD = "BoundaryGuard"


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Time series of vortex configurations with the renormalized-energy log."""

    times: np.ndarray
    states: Tuple[VortexConfiguration, ...]
    renormalized_energy: np.ndarray
    min_separation: Tuple[Separation, ...]
    termination: Termination
    dt: float
    n_modes: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=float)
        energy = np.array(self.renormalized_energy, dtype=float)
        count = len(self.states)
        if count == 0 or times.shape != (count,) or energy.shape != (count,):
            raise InvalidConfigError("times, states and energies must have one entry per step")
        if len(self.min_separation) != count:
            raise InvalidConfigError("one separation per recorded state is required")
        if times[0] != 0.0 or np.any(np.diff(times) <= 0.0):
            raise InvalidConfigError("times must start at 0 and increase strictly")
        first = self.states[0].degrees
        if any(not np.array_equal(s.degrees, first) for s in self.states[1:]):
            raise InvalidConfigError("degrees must not change along a trajectory")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "renormalized_energy", _frozen(energy))
        object.__setattr__(self, "termination", Termination(self.termination))

    @property
    def degrees(self) -> np.ndarray:
        return self.states[0].degrees

    @property
    def positions(self) -> np.ndarray:
        """Stacked positions, shape ``(n_steps, N, 2)``."""
        return np.stack([s.positions for s in self.states])

    @property
    def final(self) -> VortexConfiguration:
        return self.states[-1]

    @property
    def rho_t(self) -> float:
        """Run-level separation ``min_t ρ(b(t))``."""
        return min(s.rho for s in self.min_separation)

    def state_at(self, time: float) -> VortexConfiguration:
        """Return the recorded state nearest to *time* (within half a step)."""
        idx = int(np.argmin(np.abs(self.times - time)))
        if abs(self.times[idx] - time) > 0.5 * self.dt + 1e-12:
            raise InvalidConfigError(
                f"time {time} is not on the recorded trajectory "
                f"[0, {self.times[-1]}] with dt={self.dt}"
            )
        return self.states[idx]
