"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CodeForgeError(Exception):
    """Base class; ``stage`` is filled in by pipeline drivers."""

    stage: str | None = None


class NotPrime(CodeForgeError, ValueError):
    pass


class DegreeZero(CodeForgeError, ValueError):
    pass


class FieldTooLarge(CodeForgeError, ValueError):
    pass


class DivisionByZero(CodeForgeError, ZeroDivisionError):
    pass


class AmbientMismatch(CodeForgeError, ValueError):
    pass


class BudgetExceeded(CodeForgeError):
    """An enumeration was refused; ``count`` is the exact size that was refused."""

    def __init__(self, count: int, budget: int, what: str = "enumeration"):
        self.count = count
        self.budget = budget
        super().__init__(f"{what} of size {count} exceeds budget {budget}")


class ShapeMismatch(CodeForgeError, ValueError):
    pass


class NotInjective(CodeForgeError, ValueError):
    pass


class FieldTooSmall(CodeForgeError, ValueError):
    pass


class BadEvaluationPoints(CodeForgeError, ValueError):
    pass


class RetriesExhausted(CodeForgeError):
    pass


class AttemptsExhausted(CodeForgeError):
    def __init__(self, attempts: int, best_tau=None):
        self.attempts = attempts
        self.best_tau = best_tau
        super().__init__(f"no code certified after {attempts} attempts; best tau seen: {best_tau}")


class CapExceeded(CodeForgeError, ValueError):
    pass


class ViolationFound(CodeForgeError):
    """A verifier found a counterexample; ``report`` holds the full evidence."""

    def __init__(self, report, message: str | None = None):
        self.report = report
        super().__init__(message or f"violation found: {report!r}")


class InvalidWitness(CodeForgeError, ValueError):
    pass


class IdentityViolated(CodeForgeError):
    pass


class NotViolating(CodeForgeError, ValueError):
    pass


class PreconditionFailed(CodeForgeError, ValueError):
    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"precondition fails at coordinate {index}")


class DomainError(CodeForgeError, ValueError):
    pass


class ParseError(CodeForgeError, ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")
