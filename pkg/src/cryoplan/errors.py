"""Exception hierarchy shared by all cryoplan modules."""


class CryoplanError(Exception):
    """Base class for every error raised by this package."""


class ScenarioError(CryoplanError):
    """Problem with a scenario document."""


class ParseError(ScenarioError):
    """Scenario/data file could not be parsed.  Carries line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, path: str = ""):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path or '<input>'}:{line}:{column}" if line else (path or "<input>")
        super().__init__(f"{where}: {message}")


class ValidationError(ScenarioError):
    """A parsed value violates an invariant.  Carries the field path."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class MaterialError(CryoplanError):
    """Unknown material or temperature outside the tabulated range."""


class SolverError(CryoplanError):
    """Steady-state solve failed."""


class ConvergenceError(SolverError):
    """Solver did not reach the residual tolerance.  Carries last residuals."""

    def __init__(self, message: str, residuals=None, iterations: int = 0):
        self.residuals = dict(residuals or {})
        self.iterations = iterations
        super().__init__(message)


class CapacityExceededError(SolverError):
    """Stage load exceeds cooling capacity over the whole tabulated range."""

    def __init__(self, stage: str, load_w: float, max_capacity_w: float):
        self.stage = stage
        self.load_w = load_w
        self.max_capacity_w = max_capacity_w
        super().__init__(
            f"{stage}: load {load_w:.4g} W exceeds capacity "
            f"(max {max_capacity_w:.4g} W over the tabulated range)"
        )


class FrequencyMismatchError(CryoplanError):
    """Occupation states / chains evaluated at different frequencies."""


class ZeroOccupationError(CryoplanError):
    """Occupation is exactly zero: the effective temperature is the 0 K limit."""


class UnreachableTargetError(CryoplanError):
    """Requested chain output lies below the chain's thermal floor."""

    def __init__(self, message: str, floor_occupation: float, floor_temperature_k: float):
        self.floor_occupation = floor_occupation
        self.floor_temperature_k = floor_temperature_k
        super().__init__(message)


class FitError(CryoplanError):
    """Trace fitting failed (degenerate data or non-convergence)."""


class FitRejectedError(FitError):
    """Fit converged but fails a quality invariant (e.g. T2 error > 50%)."""


class LifetimeLimitedError(CryoplanError):
    """T2 >= 2*T1: coherence is lifetime limited, pure dephasing time diverges."""
