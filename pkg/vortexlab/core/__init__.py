from vortexlab.core.model import (
    ComplexField,
    PolarGrid,
    Separation,
    Termination,
    TrajectoryRecord,
    VectorField,
    VortexConfiguration,
    dirac_w11_distance,
    separation,
    separation_of,
)

__all__ = [
    "ComplexField",
    "PolarGrid",
    "Separation",
    "Termination",
    "TrajectoryRecord",
    "VectorField",
    "VortexConfiguration",
    "dirac_w11_distance",
    "separation",
    "separation_of",
]
