from vortexlab.spectral.boundary import (
    BoundaryExpansion,
    ExtensionKind,
    HarmonicExtension,
    evaluate_dirichlet,
    evaluate_dirichlet_gradient,
    log_boundary_datum,
    log_boundary_extension,
    neumann_phase_gradient,
    project_log_boundary,
    reconstruct_h_value,
)

__all__ = [
    "BoundaryExpansion",
    "ExtensionKind",
    "HarmonicExtension",
    "evaluate_dirichlet",
    "evaluate_dirichlet_gradient",
    "log_boundary_datum",
    "log_boundary_extension",
    "neumann_phase_gradient",
    "project_log_boundary",
    "reconstruct_h_value",
]
