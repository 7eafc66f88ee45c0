"""Canonical harmonic map and the smoothed wave function built from it.

    u*(x)  = e^{iH_n(x)} Π_j ((x − a_j)/|x − a_j|)^{d_j}
    ψ*(x)  = u*(x) Π_j f(|x − a_j|)

``H_n`` is the zero-mean conjugate of the boundary correction ``R_n`` and
``f`` the radial profile of core size ``ε`` on balls of radius ``r0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from vortexlab.config import (
    DEFAULT_N_MODES,
    DEFAULT_PROFILE_MESH,
    DEFAULT_PROFILE_TOL,
    DEFAULT_R0,
    NODE_CLEARANCE,
)
from vortexlab.core.model import ComplexField, PolarGrid, VectorField, VortexConfiguration
from vortexlab.dynamics.forcing import w_epsilon
from vortexlab.errors import GridMismatchError, InvalidConfigError, NodeOnVortexError
from vortexlab.fields.diagnostics import energy
from vortexlab.logging_config import get_logger
from vortexlab.profile.radial import RadialProfile, solve_profile
from vortexlab.spectral.boundary import (
    HarmonicExtension,
    log_boundary_extension,
    neumann_phase_gradient,
    reconstruct_h_value,
)

logger = get_logger(__name__)

_BALL_SLACK = 1e-12


def _offsets(config: VortexConfiguration, points: np.ndarray) -> np.ndarray:
    """Complex offsets ``z − a_j``, shape ``(..., N)``."""
    pts = np.asarray(points, dtype=float)
    z = pts[..., 0] + 1j * pts[..., 1]
    offsets = z[..., None] - config.complex_positions
    if config.n and np.min(np.abs(offsets)) < NODE_CLEARANCE:
        raise NodeOnVortexError("a sampling point coincides with a vortex center")
    return offsets


def canonical_map_at(
    config: VortexConfiguration,
    n_modes: int,
    points: np.ndarray,
    *,
    extension: Optional[HarmonicExtension] = None,
) -> np.ndarray:
    """Evaluate ``u*`` at arbitrary points of shape ``(..., 2)``."""
    ext = extension if extension is not None else log_boundary_extension(config, n_modes)
    offsets = _offsets(config, points)
    phases = offsets / np.abs(offsets)
    phases = np.where(config.degrees > 0, phases, np.conj(phases))
    return np.exp(1j * reconstruct_h_value(ext, points)) * np.prod(phases, axis=-1)


def canonical_map(
    config: VortexConfiguration, n_modes: int, grid: PolarGrid
) -> ComplexField:
    """Sample ``u*`` on *grid*; ``|u*| = 1`` at every node.

    Raises
    ------
    NodeOnVortexError
        If a grid node lies within ``1e-12`` of a vortex.
    """
    return ComplexField(grid=grid, values=canonical_map_at(config, n_modes, grid.points))


def canonical_supercurrent(
    config: VortexConfiguration, n_modes: int, grid: PolarGrid
) -> VectorField:
    """Closed form ``j(u*) = ∇H_n + Σ_j d_j ∇arg(x − a_j) = −∇×G``."""
    ext = log_boundary_extension(config, n_modes)
    offsets = _offsets(config, grid.points)
    winding = 1j * np.sum(config.degrees / np.conj(offsets), axis=-1)
    current = neumann_phase_gradient(ext, grid.points)
    current = current + np.stack([np.real(winding), np.imag(winding)], axis=-1)
    return VectorField(grid=grid, values=current)


def max_admissible_r0(config: VortexConfiguration) -> float:
    """Largest ``r0`` with disjoint smoothing balls inside the disk."""
    if config.n == 0:
        return math.inf
    boundary = float(np.min(1.0 - np.hypot(*config.positions.T)))
    if config.n == 1:
        return boundary
    diff = config.positions[:, None, :] - config.positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    return min(boundary, 0.5 * float(np.min(dist)))


def default_r0(config: VortexConfiguration) -> float:
    return min(DEFAULT_R0, max_admissible_r0(config))


@dataclass(frozen=True, eq=False)
class ReconstructionSpec:
    """Everything needed to assemble ``ψ*`` on a grid.

    The balls ``B_{r0}(a_j)`` must be pairwise disjoint and inside the disk,
    and the profile must have been solved for ``r0/ε``.
    """

    config: VortexConfiguration
    epsilon: float
    r0: float
    n_modes: int
    profile: RadialProfile
    grid: PolarGrid

    def __post_init__(self) -> None:
        if not (self.epsilon > 0.0 and self.r0 > 0.0):
            raise InvalidConfigError("epsilon and r0 must be positive")
        if self.r0 > max_admissible_r0(self.config) * (1.0 + _BALL_SLACK):
            raise InvalidConfigError(
                f"r0={self.r0:g} exceeds {max_admissible_r0(self.config):.6g}: smoothing balls "
                "must be disjoint and inside the disk"
            )
        if not math.isclose(self.profile.ratio, self.r0 / self.epsilon, rel_tol=1e-12):
            raise InvalidConfigError(
                f"profile ratio {self.profile.ratio:g} does not match r0/epsilon "
                f"{self.r0 / self.epsilon:g}"
            )


def build_reconstruction(
    config: VortexConfiguration,
    epsilon: float,
    grid: PolarGrid,
    *,
    r0: Optional[float] = None,
    n_modes: int = DEFAULT_N_MODES,
    mesh_size: int = DEFAULT_PROFILE_MESH,
    tol: float = DEFAULT_PROFILE_TOL,
) -> ReconstructionSpec:
    """Solve the profile for *config* and assemble a :class:`ReconstructionSpec`."""
    r0 = default_r0(config) if r0 is None else r0
    profile = solve_profile(epsilon, r0, mesh_size, tol)
    return ReconstructionSpec(
        config=config, epsilon=epsilon, r0=r0, n_modes=n_modes, profile=profile, grid=grid
    )


def reconstruct_psi(spec: ReconstructionSpec) -> ComplexField:
    """Smoothed wave function ``ψ* = u* Π_j f(|x − a_j|)``.

    Nodes at distance at least ``r0`` from every vortex keep ``u*`` unchanged.
    """
    grid = spec.grid
    u_star = canonical_map_at(spec.config, spec.n_modes, grid.points)
    if spec.config.n == 0:
        return ComplexField(grid=grid, values=u_star)
    dist = np.abs(_offsets(spec.config, grid.points))
    inside = np.min(dist, axis=-1) < spec.r0
    modulus = np.prod(spec.profile(dist), axis=-1)
    psi = np.where(inside, u_star * modulus, u_star)
    logger.info(
        "Reconstructed psi for %d vortices: epsilon=%g, r0=%g, %d of %d nodes in cores",
        spec.config.n, spec.epsilon, spec.r0, int(np.count_nonzero(inside)), grid.size,
    )
    return ComplexField(grid=grid, values=psi)


def well_prepared_gap(
    spec: ReconstructionSpec, gamma_const: float, psi: Optional[ComplexField] = None
) -> float:
    """Signed excess ``E_ε(ψ*) − W_ε`` of the reconstructed state.

    The continuous gap is bounded above by a multiple of ``(ε/r0)²``; the
    discrete value may also be negative, since the grid energy of the cores
    differs from ``γ + π ln(r0/ε)`` by the discretization error.  *psi*
    defaults to :func:`reconstruct_psi` of *spec*.
    """
    psi = reconstruct_psi(spec) if psi is None else psi
    if psi.grid != spec.grid:
        raise GridMismatchError("psi is not sampled on the reconstruction grid")
    reference = w_epsilon(spec.config, spec.n_modes, spec.epsilon, gamma_const)
    gap = energy(psi, spec.epsilon) - reference
    logger.debug("Energy gap at epsilon=%g: %.6g (W_eps=%.12g)", spec.epsilon, gap, reference)
    return gap
