"""Centralized configuration for vortexlab.

All environment variables and shared numerical defaults are defined here to
avoid scattering them across the solver modules.
"""

from __future__ import annotations

import os
from pathlib import Path

# ── Spectral boundary solver ────────────────────────────────────────────────
DEFAULT_N_MODES: int = int(os.environ.get("VORTEXLAB_N_MODES", "64"))
DEFAULT_OVERSAMPLE: int = int(os.environ.get("VORTEXLAB_OVERSAMPLE", "4"))
BOUNDARY_CLEARANCE: float = 1e-12

# ── Reduced dynamics ────────────────────────────────────────────────────────
DEFAULT_DT: float = float(os.environ.get("VORTEXLAB_DT", "1e-3"))
DEFAULT_T_MAX: float = float(os.environ.get("VORTEXLAB_T_MAX", "1.0"))
DEFAULT_RHO_MIN: float = float(os.environ.get("VORTEXLAB_RHO_MIN", "1e-3"))
REFERENCE_DT: float = float(os.environ.get("VORTEXLAB_REFERENCE_DT", "1e-5"))
REFERENCE_N_MODES: int = int(os.environ.get("VORTEXLAB_REFERENCE_N_MODES", "256"))

# ── Radial profile ──────────────────────────────────────────────────────────
DEFAULT_PROFILE_MESH: int = int(os.environ.get("VORTEXLAB_PROFILE_MESH", "2000"))
DEFAULT_PROFILE_TOL: float = float(os.environ.get("VORTEXLAB_PROFILE_TOL", "1e-8"))
PROFILE_MAX_ITER: int = int(os.environ.get("VORTEXLAB_PROFILE_MAX_ITER", "500"))
PROFILE_MIN_CORE_NODES: int = 10
DEFAULT_GAMMA_RATIOS: tuple[float, ...] = tuple(
    float(v) for v in os.environ.get("VORTEXLAB_GAMMA_RATIOS", "1e2,1e3,1e4").split(",")
)

# ── Reconstruction ──────────────────────────────────────────────────────────
DEFAULT_R0: float = float(os.environ.get("VORTEXLAB_R0", "0.3"))
DEFAULT_EPSILON: float = float(os.environ.get("VORTEXLAB_EPSILON", "0.1"))
NODE_CLEARANCE: float = 1e-12

# ── Reference GP solver ─────────────────────────────────────────────────────
DEFAULT_GP_DT: float = float(os.environ.get("VORTEXLAB_GP_DT", "1e-4"))
DEFAULT_SNAPSHOT_STRIDE: int = int(os.environ.get("VORTEXLAB_SNAPSHOT_STRIDE", "100"))
DEFAULT_GRID_N_R: int = int(os.environ.get("VORTEXLAB_GRID_N_R", "256"))
DEFAULT_GRID_N_THETA: int = int(os.environ.get("VORTEXLAB_GRID_N_THETA", "512"))

# ── Output formats ──────────────────────────────────────────────────────────
OUTPUT_DIGITS: int = 17
FIELD_MAGIC: bytes = b"GPF1"
FIELD_VERSION: int = 1
FIELD_HEADER_SIZE: int = 24

# ── Logging ─────────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.environ.get("VORTEXLAB_LOG_LEVEL", "INFO").upper()

# ── Shipped scenarios ───────────────────────────────────────────────────────
SCENARIO_DIR = Path(__file__).resolve().parent / "scenarios"


def format_number(value: float) -> str:
    """Return *value* formatted with :data:`OUTPUT_DIGITS` significant digits."""
    return f"{value:.{OUTPUT_DIGITS}g}"
