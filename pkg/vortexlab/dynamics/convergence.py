"""Convergence studies of the reduced dynamics in the time step and the truncation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from vortexlab.config import REFERENCE_DT, REFERENCE_N_MODES
from vortexlab.core.model import Termination, VortexConfiguration
from vortexlab.dynamics.integrator import IntegratorConfig, integrate
from vortexlab.errors import DegenerateFitError, GuardTriggeredError, InvalidParamsError
from vortexlab.logging_config import get_logger

logger = get_logger(__name__)

ExactSolution = Callable[[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class ConvergenceTable:
    """Final-time errors of a parameter sweep and the fitted rate.

    For a ``"dt"`` study the slope is the log-log order in the effective
    time step; for an ``"n_modes"`` study it is the log-linear decay rate
    of ``ln(error)`` per added mode.
    """

    parameter: str
    values: np.ndarray
    effective: np.ndarray
    errors: np.ndarray
    slope: float
    intercept: float
    final_time: float

    def rows(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.values.tolist(), self.effective.tolist(), self.errors.tolist()))


def fit_rate(x: np.ndarray, errors: np.ndarray, *, log_x: bool) -> Tuple[float, float]:
    """Least-squares line through ``ln(error)`` against ``x`` or ``ln(x)``.

    Only strictly positive finite errors take part in the fit.
    """
    x = np.asarray(x, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = np.isfinite(errors) & (errors > 0.0)
    if np.count_nonzero(keep) < 2:
        raise DegenerateFitError("need at least two positive errors to fit a rate")
    abscissa = np.log(x[keep]) if log_x else x[keep]
    if np.ptp(abscissa) == 0.0:
        raise DegenerateFitError("fit abscissae coincide")
    slope, intercept = np.polyfit(abscissa, np.log(errors[keep]), 1)
    return float(slope), float(intercept)


def _final_positions(initial: VortexConfiguration, cfg: IntegratorConfig) -> np.ndarray:
    record = integrate(initial, cfg)
    if record.termination is not Termination.REACHED_TMAX:
        raise GuardTriggeredError(
            f"run with dt={cfg.dt:g}, n_modes={cfg.n_modes} stopped early: "
            f"{record.termination.value} at t={record.times[-1]:.6g}"
        )
    return record.final.positions


def convergence_study(
    initial: VortexConfiguration,
    base_cfg: IntegratorConfig,
    *,
    dts: Optional[Sequence[float]] = None,
    ns: Optional[Sequence[int]] = None,
    reference_dt: float = REFERENCE_DT,
    reference_n_modes: int = REFERENCE_N_MODES,
    exact: Optional[ExactSolution] = None,
) -> ConvergenceTable:
    """Sweep ``dts`` or ``ns`` and measure final-time position errors.

    The error of a run is the Euclidean norm of the stacked position
    difference at the final time against either *exact* (a callable of the
    final time) or a reference run with the finest dt / largest n.  In a dt
    sweep every step is rounded to ``T / round(T / dt)`` so all runs land on
    the same final time ``T = base_cfg.t_max``.

    Raises
    ------
    InvalidParamsError
        If neither or both sweeps are given, fewer than two values are
        given, or the reference is not finer than the sweep.
    GuardTriggeredError
        If any run stops before its final time.
    """
    if (dts is None) == (ns is None):
        raise InvalidParamsError("give exactly one of dts or ns")
    t_final = base_cfg.t_max

    if dts is not None:
        values = np.array(dts, dtype=float)
        if values.size < 2 or np.any(values <= 0.0):
            raise InvalidParamsError("a dt sweep needs at least two positive time steps")
        steps = np.maximum(1, np.rint(t_final / values)).astype(int)
        effective = t_final / steps
        configs = [base_cfg.replace(dt=float(dt)) for dt in effective]
        if exact is None and not reference_dt < float(np.min(effective)):
            raise InvalidParamsError(
                f"reference dt {reference_dt:g} must be finer than the sweep"
            )
        ref_cfg = base_cfg.replace(dt=t_final / max(1, round(t_final / reference_dt)))
        parameter = "dt"
    else:
        values = np.array(ns, dtype=float)
        if values.size < 2 or np.any(values < 1):
            raise InvalidParamsError("an n sweep needs at least two positive mode counts")
        effective = values.copy()
        configs = [base_cfg.replace(n_modes=int(n)) for n in values]
        if exact is None and not reference_n_modes > int(np.max(values)):
            raise InvalidParamsError(
                f"reference n {reference_n_modes} must exceed the sweep"
            )
        ref_cfg = base_cfg.replace(n_modes=reference_n_modes)
        parameter = "n_modes"

    if exact is not None:
        reference = np.asarray(exact(t_final), dtype=float).reshape(-1, 2)
        logger.info("Convergence study in %s against the exact solution", parameter)
    else:
        logger.info(
            "Convergence study in %s: reference dt=%g, n_modes=%d",
            parameter, ref_cfg.dt, ref_cfg.n_modes,
        )
        reference = _final_positions(initial, ref_cfg)

    errors = []
    for cfg in configs:
        diff = _final_positions(initial, cfg) - reference
        errors.append(float(np.linalg.norm(diff.ravel())))
        logger.info("%s: dt=%g n=%d error=%.6e", parameter, cfg.dt, cfg.n_modes, errors[-1])
    errors_arr = np.array(errors)
    slope, intercept = fit_rate(effective, errors_arr, log_x=parameter == "dt")
    return ConvergenceTable(
        parameter=parameter,
        values=values,
        effective=effective,
        errors=errors_arr,
        slope=slope,
        intercept=intercept,
        final_time=t_final,
    )
