from vortexlab.profile.radial import (
    GammaEstimate,
    RadialProfile,
    compute_gamma,
    graded_mesh,
    localized_energy,
    lower_bound_constant,
    solve_profile,
)

__all__ = [
    "GammaEstimate",
    "RadialProfile",
    "compute_gamma",
    "graded_mesh",
    "localized_energy",
    "lower_bound_constant",
    "solve_profile",
]
