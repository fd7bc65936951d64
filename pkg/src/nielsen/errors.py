"""Exception hierarchy.

Every error carries the module and operation that raised it so the CLI can
name the origin of a failure. ``exit_status`` drives the CLI exit code:
1 for verdict or structural failures, 2 for usage and parse problems.
"""

from __future__ import annotations


class NielsenError(Exception):
    exit_status = 1

    def __init__(self, message: str, *, module: str = "", operation: str = "", **details):
        self.module = module
        self.operation = operation
        self.details = details
        origin = ".".join(p for p in (module, operation) if p)
        super().__init__(f"[{origin}] {message}" if origin else message)


class DimensionError(NielsenError):
    exit_status = 2


class ParseError(NielsenError):
    exit_status = 2

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None, **kw):
        self.line = line
        self.field = field
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message, **kw)


class UsageError(NielsenError):
    exit_status = 2


class ModelError(NielsenError):
    """Input matrices are not consistent with a genuine manifold map."""


class FitError(NielsenError):
    """No linear recurrence within the degree cap reproduces the sequence."""


class StructuralError(NielsenError):
    """A theorem-backed identity failed on computed data."""


class ConvergenceError(NielsenError):
    def __init__(self, message: str, *, best=None, **kw):
        self.best = best
        super().__init__(message, **kw)


class PrecisionError(NielsenError):
    """A numeric comparison could not be decided at the current tolerance."""


class PreconditionError(NielsenError):
    pass


class NeedsMoreTerms(NielsenError):
    pass


class CongruenceViolation(NielsenError):
    pass
