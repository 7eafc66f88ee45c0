"""Shared fixtures and closed-form oracles.

The image-vortex formulas below are independent of the spectral solver:
for vortices inside the unit disk the regular part ``R`` is explicit.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from vortexlab.core import PolarGrid, VortexConfiguration


def single_vortex_velocity(m: float) -> np.ndarray:
    """Velocity of one +1 vortex at ``(m, 0)``: ``(0, −2m/(1 − m²))``."""
    return np.array([0.0, -2.0 * m / (1.0 - m**2)])


def single_vortex_angular_speed(m: float) -> float:
    """Signed angular speed of the circular orbit of one +1 vortex at radius *m*."""
    return -2.0 / (1.0 - m**2)


def single_vortex_energy(m: float) -> float:
    """``W = π ln(1 − m²)`` for one vortex at distance *m* from the center."""
    return math.pi * math.log(1.0 - m**2)


def image_regular_part(config: VortexConfiguration, x: np.ndarray) -> np.ndarray:
    """``R(x) = −Σ d_j ln|1 − x conj(a_j)|``, harmonic with ``R = g_a`` on the circle."""
    z = np.asarray(x)[..., 0] + 1j * np.asarray(x)[..., 1]
    return -np.sum(
        config.degrees * np.log(np.abs(1.0 - z[..., None] * np.conj(config.complex_positions))),
        axis=-1,
    )


def rotate(points: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.asarray(points) @ np.array([[c, s], [-s, c]])


# Case 1 pair (±0.5, 0), degrees (1, 1): clockwise co-rotation at linear speed 38/15.
CASE1_SPEED = 38.0 / 15.0
CASE1_PERIOD = 15.0 * math.pi / 38.0
CASE1_ENERGY = -2.0 * math.pi * (-math.log(0.75) - math.log(1.25))


@pytest.fixture
def single_vortex() -> VortexConfiguration:
    return VortexConfiguration.from_points([(0.5, 0.0)], [1])


@pytest.fixture
def case1() -> VortexConfiguration:
    return VortexConfiguration.from_points([(-0.5, 0.0), (0.5, 0.0)], [1, 1])


@pytest.fixture
def dipole() -> VortexConfiguration:
    return VortexConfiguration.from_points([(-0.7, 0.0), (0.7, 0.0)], [-1, 1])


@pytest.fixture
def small_grid() -> PolarGrid:
    return PolarGrid(n_r=64, n_theta=128)


@pytest.fixture
def medium_grid() -> PolarGrid:
    return PolarGrid(n_r=128, n_theta=256)
