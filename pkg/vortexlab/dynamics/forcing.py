"""Renormalized energy of a vortex configuration and its Hamiltonian forcing.

    W(a) = −π Σ_{i≠j} d_i d_j ln|a_i − a_j| − π Σ_j d_j R(a_j)

with ``R`` the harmonic extension of ``−Σ_k d_k ln|e^{iθ} − a_k|``.  The
reduced dynamics is ``ȧ_j = −(1/π) d_j 𝕁 ∇_{a_j}W`` where ``𝕁v = (v_y, −v_x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from vortexlab.config import BOUNDARY_CLEARANCE, DEFAULT_N_MODES
from vortexlab.core.model import Separation, VortexConfiguration, separation
from vortexlab.errors import DegenerateConfigError, InvalidParamsError
from vortexlab.spectral.boundary import (
    HarmonicExtension,
    evaluate_dirichlet,
    evaluate_dirichlet_gradient,
    log_boundary_extension,
)

SYMPLECTIC = np.array([[0.0, 1.0], [-1.0, 0.0]])
SYMPLECTIC.setflags(write=False)


@dataclass(frozen=True, eq=False)
class ForcingEvaluation:
    """Velocities and energy gradients of every vortex, shape ``(N, 2)``."""

    velocities: np.ndarray
    grad_w: np.ndarray
    separation_at_eval: Separation


def _require_nondegenerate(config: VortexConfiguration) -> Separation:
    sep = separation(config)
    if config.n and 4.0 * sep.rho < BOUNDARY_CLEARANCE:
        raise DegenerateConfigError(
            f"configuration is degenerate (rho = {sep.rho:.3g}, limited by {sep.limited_by})"
        )
    return sep


def _extension(
    config: VortexConfiguration, n_modes: int, extension: Optional[HarmonicExtension]
) -> HarmonicExtension:
    return extension if extension is not None else log_boundary_extension(config, n_modes)


def interaction_gradient(config: VortexConfiguration) -> np.ndarray:
    """``Σ_{k≠j} d_k (a_j − a_k)/|a_j − a_k|²`` for every ``j``."""
    pos = config.positions
    diff = pos[:, None, :] - pos[None, :, :]
    dist2 = np.sum(diff**2, axis=-1)
    np.fill_diagonal(dist2, np.inf)
    return np.sum(config.degrees[None, :, None] * diff / dist2[..., None], axis=1)


def renormalized_energy(
    config: VortexConfiguration,
    n_modes: int = DEFAULT_N_MODES,
    *,
    extension: Optional[HarmonicExtension] = None,
) -> float:
    """Renormalized energy ``W`` with ``R`` replaced by its truncation ``R_n``.

    The pair sum runs over ordered pairs.
    """
    if config.n == 0:
        return 0.0
    _require_nondegenerate(config)
    ext = _extension(config, n_modes, extension)
    boundary = float(np.dot(config.degrees, evaluate_dirichlet(ext, config.positions)))
    pair = 0.0
    if config.n > 1:
        diff = config.positions[:, None, :] - config.positions[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(dist, 1.0)
        pair = float(np.sum(np.outer(config.degrees, config.degrees) * np.log(dist)))
    return -math.pi * pair - math.pi * boundary


def w_epsilon(
    config: VortexConfiguration,
    n_modes: int,
    epsilon: float,
    gamma_const: float,
) -> float:
    """Reference energy ``W_ε = N(γ + π ln(1/ε)) + W``."""
    if not epsilon > 0.0:
        raise InvalidParamsError(f"epsilon must be positive, got {epsilon}")
    if config.n == 0:
        return 0.0
    self_energy = gamma_const + math.pi * math.log(1.0 / epsilon)
    return config.n * self_energy + renormalized_energy(config, n_modes)


def forcing(
    config: VortexConfiguration,
    n_modes: int = DEFAULT_N_MODES,
    *,
    extension: Optional[HarmonicExtension] = None,
) -> ForcingEvaluation:
    """Approximate forcing term ``F^n`` of the reduced Hamiltonian ODE."""
    sep = _require_nondegenerate(config)
    if config.n == 0:
        empty = np.zeros((0, 2))
        return ForcingEvaluation(velocities=empty, grad_w=empty, separation_at_eval=sep)
    ext = _extension(config, n_modes, extension)
    local = evaluate_dirichlet_gradient(ext, config.positions) + interaction_gradient(config)
    degrees = config.degrees[:, None]
    grad_w = -2.0 * math.pi * degrees * local
    velocities = -(1.0 / math.pi) * degrees * (grad_w @ SYMPLECTIC.T)
    return ForcingEvaluation(velocities=velocities, grad_w=grad_w, separation_at_eval=sep)
