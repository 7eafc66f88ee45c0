from vortexlab.gp.localize import DetectedVortices, localize_vortices, plaquette_windings
from vortexlab.gp.solver import (
    CrankNicolson,
    GPConfig,
    GPRun,
    PolarLaplacian,
    angular_cutoff,
    gp_step,
    nonlinear_flow,
    polar_filter,
    run_gp,
)

__all__ = [
    "CrankNicolson",
    "DetectedVortices",
    "GPConfig",
    "GPRun",
    "PolarLaplacian",
    "angular_cutoff",
    "gp_step",
    "localize_vortices",
    "nonlinear_flow",
    "plaquette_windings",
    "polar_filter",
    "run_gp",
]
