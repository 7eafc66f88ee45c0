"""Error metrics between sampled fields and the ε-regression of error curves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from vortexlab.core.model import ComplexField, VectorField
from vortexlab.errors import DegenerateFitError, GridMismatchError, InvalidParamsError
from vortexlab.fields.diagnostics import gradient, supercurrent

Field = Union[ComplexField, VectorField]


class Metric(str, Enum):
    """Distances offered by ``vortexlab compare``."""

    L43_SUPERCURRENT = "l43-supercurrent"
    L2 = "l2"
    L2_GRADIENT = "l2-gradient"


def _pointwise(values: np.ndarray, vector: bool) -> np.ndarray:
    if vector:
        return np.hypot(values[..., 0], values[..., 1])
    return np.abs(values)


def _weighted_norm(grid_weights: np.ndarray, magnitude: np.ndarray, p: float) -> float:
    return float(np.sum(grid_weights * magnitude**p) ** (1.0 / p))


def lp_norm(field_a: Field, field_b: Optional[Field], p: float) -> float:
    """``(Σ w |a − b|^p)^{1/p}`` with polar quadrature weights.

    ``field_b=None`` gives the norm of *field_a*.  Vector fields use the
    Euclidean length of the pointwise difference.

    Raises
    ------
    GridMismatchError
        If the fields live on different grids or are of different kinds.
    InvalidParamsError
        If ``p < 1``.
    """
    if not p >= 1.0:
        raise InvalidParamsError(f"p must be >= 1, got {p}")
    vector = isinstance(field_a, VectorField)
    diff = field_a.values
    if field_b is not None:
        if type(field_a) is not type(field_b):
            raise GridMismatchError("cannot compare a vector field with a complex field")
        if field_a.grid != field_b.grid:
            raise GridMismatchError(
                f"grids differ: {field_a.grid.shape} vs {field_b.grid.shape}"
            )
        diff = field_a.values - field_b.values
    return _weighted_norm(field_a.grid.weights, _pointwise(diff, vector), p)


def best_phase(psi_a: ComplexField, psi_b: ComplexField) -> float:
    """The ``φ`` minimizing ``‖ψ_a − e^{iφ}ψ_b‖_{L²}``: ``arg⟨ψ_b, ψ_a⟩``."""
    if psi_a.grid != psi_b.grid:
        raise GridMismatchError("grids differ")
    inner = np.sum(psi_a.grid.weights * np.conj(psi_b.values) * psi_a.values)
    return float(np.angle(inner))


def _gradient_norm(field: ComplexField) -> float:
    d_x, d_y = gradient(field)
    return float(np.sqrt(np.sum(field.grid.weights * (np.abs(d_x) ** 2 + np.abs(d_y) ** 2))))


def compare(
    psi_a: ComplexField,
    psi_b: ComplexField,
    metric: Union[Metric, str],
    *,
    relative: bool = False,
    mod_phase: bool = False,
) -> float:
    """Distance between two wave functions under *metric*.

    ``relative`` divides by the same norm of *psi_a*; ``mod_phase`` first
    rotates *psi_b* by :func:`best_phase`.
    """
    metric = Metric(metric)
    if psi_a.grid != psi_b.grid:
        raise GridMismatchError(f"grids differ: {psi_a.grid.shape} vs {psi_b.grid.shape}")
    if mod_phase:
        psi_b = psi_b.with_values(psi_b.values * np.exp(1j * best_phase(psi_a, psi_b)))

    if metric is Metric.L43_SUPERCURRENT:
        j_a = supercurrent(psi_a)
        distance = lp_norm(j_a, supercurrent(psi_b), 4.0 / 3.0)
        scale = lp_norm(j_a, None, 4.0 / 3.0) if relative else 1.0
    elif metric is Metric.L2:
        distance = lp_norm(psi_a, psi_b, 2.0)
        scale = lp_norm(psi_a, None, 2.0) if relative else 1.0
    else:
        distance = _gradient_norm(psi_a.with_values(psi_a.values - psi_b.values))
        scale = _gradient_norm(psi_a) if relative else 1.0

    if scale == 0.0:
        raise InvalidParamsError("relative error undefined: reference norm is zero")
    return distance / scale


# ── ε-regression ────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Regression:
    """``ln e ≈ slope · ln ε + intercept``; ``residual`` is the RMS misfit in ``ln e``."""

    slope: float
    intercept: float
    residual: float


def epsilon_regression(points: Iterable[Sequence[float]]) -> Regression:
    """Least-squares power law through ``(ε, error)`` pairs.

    Raises
    ------
    DegenerateFitError
        With fewer than three points, non-positive values or a single ε.
    """
    data = np.array([tuple(p) for p in points], dtype=float).reshape(-1, 2)
    if data.shape[0] < 3:
        raise DegenerateFitError(f"need at least 3 points, got {data.shape[0]}")
    if not np.all(np.isfinite(data)) or np.any(data <= 0.0):
        raise DegenerateFitError("epsilon and error values must be positive and finite")
    log_eps, log_err = np.log(data[:, 0]), np.log(data[:, 1])
    if np.ptp(log_eps) == 0.0:
        raise DegenerateFitError("all epsilon values coincide")
    design = np.column_stack([log_eps, np.ones_like(log_eps)])
    (slope, intercept), *_ = np.linalg.lstsq(design, log_err, rcond=None)
    misfit = log_err - design @ np.array([slope, intercept])
    return Regression(
        slope=float(slope),
        intercept=float(intercept),
        residual=float(math.sqrt(np.mean(misfit**2))),
    )


def regression_comments(
    prefix: str, points: Sequence[Tuple[float, float]]
) -> List[Tuple[str, float]]:
    """``# key=value`` trailers for a fitted error curve, empty when not fittable."""
    try:
        fit = epsilon_regression(points)
    except DegenerateFitError:
        return []
    return [
        (f"{prefix}slope", fit.slope),
        (f"{prefix}intercept", fit.intercept),
        (f"{prefix}residual", fit.residual),
    ]
