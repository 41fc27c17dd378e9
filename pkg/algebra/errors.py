from typing import List, Optional


class PreconditionError(ValueError):
    """A hypothesis of an operation does not hold. `failed` names every violated one."""

    def __init__(self, failed, message: Optional[str] = None):
        if isinstance(failed, str):
            failed = [failed]
        self.failed: List[str] = list(failed)
        super().__init__(message or "precondition violated: " + "; ".join(self.failed))


class ReducibleModulusError(PreconditionError):
    """The reduction of f mod p is not irreducible over F_p."""


class NonUnitError(PreconditionError):
    """An element that must be a unit is not."""


class BudgetExceededError(RuntimeError):
    def __init__(self, what: str, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} steps, budget is {budget}")


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagreed."""
