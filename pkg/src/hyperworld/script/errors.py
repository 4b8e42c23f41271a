from __future__ import annotations

from ..errors import HyperworldError


class ScriptError(HyperworldError):
    """A compile-time diagnostic carrying a source location."""

    label = "error"

    def __init__(self, message: str, line: int = 0, col: int = 0, filename: str | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.filename = filename

    def __str__(self):
        return self.format()

    def format(self, filename: str | None = None) -> str:
        name = filename or self.filename or "<script>"
        return f"{name}:{self.line}:{self.col}: {self.label}: {self.message}"


class ScriptSyntaxError(ScriptError):
    label = "syntax error"


class UnknownBuiltin(ScriptError):
    label = "unknown builtin"


class ScriptTypeError(ScriptError):
    label = "type error"


class RuntimeFault(HyperworldError):
    """A builtin was refused at run time (gating violation, math error, ...)."""

    def __init__(self, reason: str, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{reason}: {message}")
        self.reason = reason
        self.message = message
        self.line = line
        self.col = col


class BudgetExceeded(RuntimeFault):
    def __init__(self, budget: int, line: int = 0, col: int = 0):
        super().__init__("BudgetExceeded", f"event exceeded {budget} operations", line, col)
        self.budget = budget
