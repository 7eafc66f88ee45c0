from vortexlab.fields.diagnostics import (
    cartesian_derivatives,
    divergence,
    energy,
    energy_density,
    gradient,
    jacobian,
    mass,
    supercurrent,
)
from vortexlab.fields.reconstruction import (
    ReconstructionSpec,
    build_reconstruction,
    canonical_map,
    canonical_map_at,
    canonical_supercurrent,
    default_r0,
    max_admissible_r0,
    reconstruct_psi,
    well_prepared_gap,
)

__all__ = [
    "ReconstructionSpec",
    "build_reconstruction",
    "canonical_map",
    "canonical_map_at",
    "canonical_supercurrent",
    "cartesian_derivatives",
    "default_r0",
    "divergence",
    "energy",
    "energy_density",
    "gradient",
    "jacobian",
    "mass",
    "max_admissible_r0",
    "reconstruct_psi",
    "supercurrent",
    "well_prepared_gap",
]
