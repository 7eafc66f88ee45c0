"""Scenario files: JSON descriptions of an initial configuration and run parameters.

Example::

    {
      "domain": "unit_disk",
      "vortices": [{"x": -0.5, "y": 0.0, "degree": 1}, {"x": 0.5, "y": 0.0, "degree": 1}],
      "epsilon": 0.05,
      "dt": 1e-3,
      "t_max": 1.0,
      "grid": {"n_r": 256, "n_theta": 512}
    }

A bare name such as ``case1`` resolves to the scenarios shipped with the package.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from vortexlab.config import (
    DEFAULT_DT,
    DEFAULT_EPSILON,
    DEFAULT_GP_DT,
    DEFAULT_GRID_N_R,
    DEFAULT_GRID_N_THETA,
    DEFAULT_N_MODES,
    DEFAULT_OVERSAMPLE,
    DEFAULT_RHO_MIN,
    DEFAULT_SNAPSHOT_STRIDE,
    DEFAULT_T_MAX,
    SCENARIO_DIR,
)
from vortexlab.core.model import PolarGrid, VortexConfiguration
from vortexlab.dynamics.integrator import IntegratorConfig
from vortexlab.errors import ScenarioError, VortexLabError
from vortexlab.gp.solver import GPConfig
from vortexlab.logging_config import get_logger

logger = get_logger(__name__)

# ── Pydantic models ────────────────────────────────────────────────────────


class VortexSpec(BaseModel):
    """One point vortex."""

    model_config = ConfigDict(extra="forbid")

    x: float
    y: float
    degree: Literal[-1, 1]


class GridSpec(BaseModel):
    """Polar sampling grid for fields and the reference solver."""

    model_config = ConfigDict(extra="forbid")

    n_r: int = Field(DEFAULT_GRID_N_R, ge=2)
    n_theta: int = Field(DEFAULT_GRID_N_THETA, ge=4)

    @field_validator("n_theta")
    @classmethod
    def _even(cls, value: int) -> int:
        if value % 2:
            raise ValueError("n_theta must be even")
        return value


class ScenarioConfig(BaseModel):
    """A complete run description."""

    model_config = ConfigDict(extra="forbid")

    domain: Literal["unit_disk"] = "unit_disk"
    name: Optional[str] = None
    vortices: List[VortexSpec]
    epsilon: float = Field(DEFAULT_EPSILON, gt=0.0)
    r0: Optional[float] = Field(None, gt=0.0)
    n_modes: int = Field(DEFAULT_N_MODES, ge=1)
    oversample: int = Field(DEFAULT_OVERSAMPLE, ge=2)
    dt: float = Field(DEFAULT_DT, gt=0.0)
    t_max: float = Field(DEFAULT_T_MAX, gt=0.0)
    rho_min: float = Field(DEFAULT_RHO_MIN, gt=0.0)
    gp_dt: float = Field(DEFAULT_GP_DT, gt=0.0)
    snapshot_stride: int = Field(DEFAULT_SNAPSHOT_STRIDE, ge=1)
    grid: GridSpec = Field(default_factory=GridSpec)

    @model_validator(mode="after")
    def _admissible(self) -> ScenarioConfig:
        try:
            self.configuration()
        except VortexLabError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def configuration(self) -> VortexConfiguration:
        return VortexConfiguration.from_points(
            [(v.x, v.y) for v in self.vortices], [v.degree for v in self.vortices]
        )

    def integrator_config(self, **overrides: object) -> IntegratorConfig:
        cfg = IntegratorConfig(
            dt=self.dt,
            t_max=self.t_max,
            n_modes=self.n_modes,
            rho_min=self.rho_min,
            oversample=self.oversample,
        )
        changes = {k: v for k, v in overrides.items() if v is not None}
        return cfg.replace(**changes) if changes else cfg

    def polar_grid(self) -> PolarGrid:
        return PolarGrid(n_r=self.grid.n_r, n_theta=self.grid.n_theta)

    def gp_config(
        self,
        *,
        epsilon: Optional[float] = None,
        dt: Optional[float] = None,
        t_max: Optional[float] = None,
    ) -> GPConfig:
        return GPConfig(
            grid=self.polar_grid(),
            epsilon=self.epsilon if epsilon is None else epsilon,
            dt=self.gp_dt if dt is None else dt,
            t_max=self.t_max if t_max is None else t_max,
            snapshot_stride=self.snapshot_stride,
        )


# ── Loading ────────────────────────────────────────────────────────────────


def resolve_scenario_path(path: Union[str, Path]) -> Path:
    """Return *path*, falling back to a shipped scenario of that name."""
    candidate = Path(path)
    if candidate.exists():
        return candidate
    shipped = SCENARIO_DIR / f"{candidate.stem}.json"
    if candidate.parent == Path(".") and shipped.exists():
        return shipped
    return candidate


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a scenario file.

    Raises
    ------
    ScenarioError
        Naming the file and the offending field.
    """
    resolved = resolve_scenario_path(path)
    try:
        raw = json.loads(resolved.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioError(f"{resolved}: cannot read scenario: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{resolved}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    try:
        scenario = ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
            for err in exc.errors()
        )
        raise ScenarioError(f"{resolved}: {problems}") from exc
    logger.info("Loaded scenario %s with %d vortices", resolved, len(scenario.vortices))
    return scenario
