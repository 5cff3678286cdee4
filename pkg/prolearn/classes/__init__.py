from .config import ExperimentConfig, parse_config
from .errors import ConfigError, DegenerateTaskError, ProLearnError, SolverConvergenceError
from .hypothesis import ChanceHypothesis, HypothesisSequence, LinearHypothesis
from .state import ExperimentState, InputState, RunResult, run_status

__all__ = [
    "ChanceHypothesis",
    "ConfigError",
    "DegenerateTaskError",
    "ExperimentConfig",
    "ExperimentState",
    "HypothesisSequence",
    "InputState",
    "LinearHypothesis",
    "ProLearnError",
    "RunResult",
    "SolverConvergenceError",
    "parse_config",
    "run_status",
]
