"""
Error types shared by the library and the command line.

Every error carries a `detail` message and the exit status the CLI reports
for it, the way an HTTP error carries a status code and a detail.
"""
from typing import Iterable, List, Optional


class DualGraphError(Exception):
    """Base class for all errors raised by dualgraph"""
    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InputError(DualGraphError):
    """Unreadable file, malformed JSON or a document that violates its schema"""
    exit_code = 2


class ConfigError(DualGraphError):
    """Invalid value in the environment or in .env"""
    exit_code = 2


class ValidationFailure(DualGraphError):
    """A morphism or covering fails one or more of its axioms"""
    exit_code = 1

    def __init__(self, detail: str, violations: Optional[Iterable] = None):
        super().__init__(detail)
        self.violations: List = list(violations or [])

    def __str__(self) -> str:
        if not self.violations:
            return self.detail
        lines = [self.detail]
        for violation in self.violations:
            lines.append(f"  [{violation.axiom}] {violation.message}")
        return "\n".join(lines)


class InternalError(DualGraphError):
    """A state the mathematics rules out; always a bug"""
    exit_code = 3


class DimensionMismatch(ValueError):
    """Matrix or vector shapes do not fit together"""


class InvalidCycle(ValueError):
    """A walk that is not closed, is empty or uses unknown darts"""


class NotAPower(ValueError):
    """The image of a cycle is not a whole number of turns around the base cycle"""
