from typing import Optional


class ProLearnError(Exception):
    """Base class for all errors raised by prolearn."""


class ConfigError(ProLearnError, ValueError):
    """Raised when an experiment config cannot be parsed or validated."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class DegenerateTaskError(ProLearnError, ValueError):
    """Raised when a task has no informative direction (mu_pos == mu_neg)."""


class SolverConvergenceError(ProLearnError, RuntimeError):
    """Raised when the ERM solver misses its gradient tolerance at the iteration cap."""

    def __init__(self, grad_norm: float, iterations: int, tol: float, step: Optional[int] = None):
        self.grad_norm = grad_norm
        self.iterations = iterations
        self.tol = tol
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(
            f"ERM solver did not converge{where}: gradient norm {grad_norm:.3e} > {tol:.1e} "
            f"after {iterations} iterations"
        )

    def at_step(self, step: int) -> "SolverConvergenceError":
        return SolverConvergenceError(self.grad_norm, self.iterations, self.tol, step=step)
