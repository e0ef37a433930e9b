from typing import Optional


class RelGaloisError(Exception):
    """Base class; model validators raise these unwrapped."""


class DomainMismatchError(RelGaloisError):
    pass


class ArityMismatchError(RelGaloisError):
    pass


class PreconditionError(RelGaloisError):
    pass


class WitnessError(RelGaloisError):
    """A constructed witness failed its own post-check."""


class BudgetExceededError(RelGaloisError):
    def __init__(self, what: str, required: float, limit: float):
        self.what = what
        self.required = required
        self.limit = limit
        super().__init__(f"{what}: needs {required:g}, budget is {limit:g}")


class WorkspaceError(RelGaloisError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{location}{message}")
