"""Spectral solution of Laplace boundary problems on the unit disk.

A real boundary datum ``g(e^{iθ})`` is projected onto its first ``2n+1``
Fourier modes; the harmonic extension ``Σ ĝ(k) r^{|k|} e^{ikθ}`` is then
evaluated as the real part of the analytic polynomial

    F(z) = ĝ(0) + 2 Σ_{k=1..n} ĝ(k) z^k,

so the value is ``Re F`` and the Cartesian gradient is ``(Re F', −Im F')``.
The harmonic conjugate of the extension is ``Im F``; it carries the
coefficients ``−i·sgn(k)·ĝ(k)`` and its gradient is ``−∇×`` of the extension.

Every evaluator accepts one point ``(2,)`` or an array of points ``(..., 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import fft

from vortexlab.config import BOUNDARY_CLEARANCE, DEFAULT_N_MODES, DEFAULT_OVERSAMPLE
from vortexlab.core.model import VortexConfiguration
from vortexlab.errors import (
    DegenerateConfigError,
    InvalidConfigError,
    InvalidParamsError,
    OutsideDomainError,
)
from vortexlab.logging_config import get_logger

logger = get_logger(__name__)

ArrayOrFloat = Union[float, np.ndarray]

_SYMMETRY_TOL = 1e-12


class ExtensionKind(str, Enum):
    DIRICHLET = "Dirichlet"
    NEUMANN_CONJUGATE = "NeumannConjugate"


@dataclass(frozen=True, eq=False)
class BoundaryExpansion:
    """Fourier coefficients ``ĝ(k)``, ``|k| ≤ n``, of a real boundary datum.

    ``coefficients[k + n]`` holds ``ĝ(k)``; the array has length ``2n + 1``
    and satisfies ``ĝ(−k) = conj(ĝ(k))``.
    """

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=complex).reshape(-1)
        if coeffs.size < 3 or coeffs.size % 2 == 0:
            raise InvalidConfigError(
                f"expected 2n+1 coefficients with n >= 1, got {coeffs.size}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise InvalidConfigError("Fourier coefficients must be finite")
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        if np.max(np.abs(coeffs - np.conj(coeffs[::-1]))) > _SYMMETRY_TOL * scale:
            raise InvalidConfigError("coefficients must satisfy g(-k) = conj(g(k))")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_nonnegative(cls, positive: np.ndarray) -> BoundaryExpansion:
        """Build the expansion from ``ĝ(0), ĝ(1), …, ĝ(n)``."""
        positive = np.array(positive, dtype=complex).reshape(-1)
        positive[0] = positive[0].real
        return cls(np.concatenate([np.conj(positive[:0:-1]), positive]))

    @property
    def max_mode(self) -> int:
        return (self.coefficients.size - 1) // 2

    @property
    def nonnegative(self) -> np.ndarray:
        """``ĝ(0), …, ĝ(n)``."""
        return self.coefficients[self.max_mode :]

    def coefficient(self, k: int) -> complex:
        if abs(k) > self.max_mode:
            return 0j
        return complex(self.coefficients[k + self.max_mode])

    def boundary_values(self, theta: np.ndarray) -> np.ndarray:
        """Evaluate the truncated series ``P_n g`` on the unit circle."""
        return _real_series(self.nonnegative, np.exp(1j * np.asarray(theta, dtype=float)))

    def __add__(self, other: BoundaryExpansion) -> BoundaryExpansion:
        n = max(self.max_mode, other.max_mode)
        return BoundaryExpansion(_padded(self, n) + _padded(other, n))


def _padded(expansion: BoundaryExpansion, n: int) -> np.ndarray:
    pad = n - expansion.max_mode
    return np.pad(expansion.coefficients, (pad, pad))


@dataclass(frozen=True, eq=False)
class HarmonicExtension:
    """Harmonic extension into the disk of a :class:`BoundaryExpansion`."""

    expansion: BoundaryExpansion
    kind: ExtensionKind = ExtensionKind.DIRICHLET

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ExtensionKind(self.kind))
        if (
            self.kind is ExtensionKind.NEUMANN_CONJUGATE
            and abs(self.expansion.coefficient(0)) > _SYMMETRY_TOL
        ):
            raise InvalidConfigError("a NeumannConjugate extension must have zero mean")

    @property
    def max_mode(self) -> int:
        return self.expansion.max_mode

    def conjugate(self) -> HarmonicExtension:
        """Zero-mean harmonic conjugate: coefficients ``−i·sgn(k)·ĝ(k)``."""
        n = self.max_mode
        signs = np.sign(np.arange(-n, n + 1))
        coeffs = -1j * signs * self.expansion.coefficients
        return HarmonicExtension(BoundaryExpansion(coeffs), ExtensionKind.NEUMANN_CONJUGATE)


# ── Projection ──────────────────────────────────────────────────────────────


def log_boundary_datum(config: VortexConfiguration, theta: np.ndarray) -> np.ndarray:
    """``g_a(e^{iθ}) = −Σ_j d_j ln|e^{iθ} − a_j|``."""
    circle = np.exp(1j * np.asarray(theta, dtype=float))
    if config.n == 0:
        return np.zeros(circle.shape)
    dist = np.abs(circle[..., None] - config.complex_positions)
    return -np.sum(config.degrees * np.log(dist), axis=-1)


def project_log_boundary(
    config: VortexConfiguration,
    n: int = DEFAULT_N_MODES,
    oversample: int = DEFAULT_OVERSAMPLE,
) -> BoundaryExpansion:
    """Fourier-project the log-distance boundary datum of *config*.

    The datum is sampled at ``M ≥ oversample·(2n+1)`` equispaced angles
    (``M`` a fast FFT length) and the first ``n+1`` coefficients of its real
    FFT are kept.

    Raises
    ------
    InvalidParamsError
        If ``n < 1`` or ``oversample < 2``.
    DegenerateConfigError
        If a vortex lies within ``1e-12`` of the unit circle.
    """
    if n < 1:
        raise InvalidParamsError(f"n must be >= 1, got {n}")
    if oversample < 2:
        raise InvalidParamsError(f"oversample must be >= 2, got {oversample}")
    if config.n:
        clearance = 1.0 - np.abs(config.complex_positions)
        if np.min(clearance) < BOUNDARY_CLEARANCE:
            raise DegenerateConfigError(
                f"vortex {int(np.argmin(clearance))} is on the boundary circle"
            )
    samples = fft.next_fast_len(oversample * (2 * n + 1), real=True)
    theta = 2.0 * math.pi * np.arange(samples) / samples
    spectrum = fft.rfft(log_boundary_datum(config, theta)) / samples
    logger.debug("Projected %d vortices on %d modes using %d samples", config.n, n, samples)
    return BoundaryExpansion.from_nonnegative(spectrum[: n + 1])


def log_boundary_extension(
    config: VortexConfiguration,
    n_modes: int = DEFAULT_N_MODES,
    oversample: int = DEFAULT_OVERSAMPLE,
) -> HarmonicExtension:
    """Dirichlet extension ``R_n`` of the projected log datum of *config*."""
    return HarmonicExtension(project_log_boundary(config, n_modes, oversample))


# ── Evaluation ──────────────────────────────────────────────────────────────


def _power_weights(positive: np.ndarray) -> np.ndarray:
    weights = 2.0 * positive
    weights[0] = positive[0]
    return weights


def _real_series(positive: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.real(npoly.polyval(z, _power_weights(positive)))


def _to_complex(x: np.ndarray) -> Tuple[np.ndarray, bool]:
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1:] != (2,):
        raise InvalidConfigError(f"points must have a trailing axis of length 2, got {pts.shape}")
    z = pts[..., 0] + 1j * pts[..., 1]
    if np.any(np.abs(z) >= 1.0):
        raise OutsideDomainError("evaluation point lies on or outside the unit circle")
    return z, pts.ndim == 1


def _analytic(ext: HarmonicExtension, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, bool]:
    z, scalar = _to_complex(x)
    weights = _power_weights(ext.expansion.nonnegative)
    return npoly.polyval(z, weights), npoly.polyval(z, npoly.polyder(weights)), scalar


def evaluate_dirichlet(ext: HarmonicExtension, x: np.ndarray) -> ArrayOrFloat:
    """Value of the truncated harmonic series at *x*."""
    value, _, scalar = _analytic(ext, x)
    return float(np.real(value)) if scalar else np.real(value)


def evaluate_dirichlet_gradient(ext: HarmonicExtension, x: np.ndarray) -> np.ndarray:
    """Cartesian gradient of the truncated harmonic series at *x*."""
    _, deriv, _ = _analytic(ext, x)
    return np.stack([np.real(deriv), -np.imag(deriv)], axis=-1)


def neumann_phase_gradient(ext_r: HarmonicExtension, x: np.ndarray) -> np.ndarray:
    """``∇H_n(x) = −∇×R_n(x) = (−∂_y R_n, ∂_x R_n)``."""
    _require_dirichlet(ext_r)
    grad = evaluate_dirichlet_gradient(ext_r, x)
    return np.stack([-grad[..., 1], grad[..., 0]], axis=-1)


def reconstruct_h_value(ext_r: HarmonicExtension, x: np.ndarray) -> ArrayOrFloat:
    """Zero-mean harmonic function ``H_n`` with ``∇H_n = −∇×R_n``."""
    _require_dirichlet(ext_r)
    return evaluate_dirichlet(ext_r.conjugate(), x)


def _require_dirichlet(ext: HarmonicExtension) -> None:
    if ext.kind is not ExtensionKind.DIRICHLET:
        raise InvalidConfigError(f"expected a Dirichlet extension, got {ext.kind.value}")
