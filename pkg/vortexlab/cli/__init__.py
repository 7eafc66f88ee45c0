from vortexlab.cli.io import read_field, read_trajectory, write_field, write_trajectory
from vortexlab.cli.metrics import Metric, compare, epsilon_regression, lp_norm
from vortexlab.cli.scenario import ScenarioConfig, load_scenario

__all__ = [
    "Metric",
    "ScenarioConfig",
    "compare",
    "epsilon_regression",
    "load_scenario",
    "lp_norm",
    "read_field",
    "read_trajectory",
    "write_field",
    "write_trajectory",
]
