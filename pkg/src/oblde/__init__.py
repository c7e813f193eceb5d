"""Differential evolution with pluggable opposition-based learning."""

from ._backend import get_backend, set_backend, use_backend
from .core import (
    RNG_VERSION,
    Bounds,
    BudgetExhausted,
    ContractError,
    EvaluationBudget,
    Individual,
    ParameterError,
    Population,
    RngStream,
    clamp_to_bounds,
    random_point,
)
from .de import DeConfig, RunRecord, run
from .objective import evaluate, fev, list_functions, make_function
from .obl import JumpingPolicy, OblStrategy, make_strategy

__version__ = "0.1.0"
