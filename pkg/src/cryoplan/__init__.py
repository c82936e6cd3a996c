"""cryoplan: heat budgets, noise cascades and coherence analytics for cryogenic qubit wiring."""

__version__ = "0.1.0"

from .errors import (
    CryoplanError,
    ScenarioError,
    ParseError,
    ValidationError,
    MaterialError,
    SolverError,
    ConvergenceError,
    CapacityExceededError,
    FrequencyMismatchError,
    UnreachableTargetError,
    ZeroOccupationError,
    FitError,
    FitRejectedError,
    LifetimeLimitedError,
)

__all__ = [
    "__version__",
    "CryoplanError",
    "ScenarioError",
    "ParseError",
    "ValidationError",
    "MaterialError",
    "SolverError",
    "ConvergenceError",
    "CapacityExceededError",
    "FrequencyMismatchError",
    "UnreachableTargetError",
    "ZeroOccupationError",
    "FitError",
    "FitRejectedError",
    "LifetimeLimitedError",
]
