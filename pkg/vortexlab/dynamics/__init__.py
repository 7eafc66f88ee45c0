from vortexlab.dynamics.convergence import ConvergenceTable, convergence_study, fit_rate
from vortexlab.dynamics.forcing import (
    SYMPLECTIC,
    ForcingEvaluation,
    forcing,
    interaction_gradient,
    renormalized_energy,
    w_epsilon,
)
from vortexlab.dynamics.integrator import IntegratorConfig, integrate, trajectory_energy_drift

__all__ = [
    "SYMPLECTIC",
    "ConvergenceTable",
    "ForcingEvaluation",
    "IntegratorConfig",
    "convergence_study",
    "fit_rate",
    "forcing",
    "integrate",
    "interaction_gradient",
    "renormalized_energy",
    "trajectory_energy_drift",
    "w_epsilon",
]
