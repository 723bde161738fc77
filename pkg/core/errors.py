"""
Exception hierarchy for the transport lab.

Every error carries the process exit code the command-line front end reports for it:

    - **InputError** (2): invalid measures, specs, configs, or arguments outside an operation's domain.
    - **NumericError** (3): a cross-check between two computation routes or a certified inequality failed.
    - **AcceptanceFailure** (1): one or more acceptance criteria did not pass.
"""



from typing import Optional



class LabError(Exception):
    """Base class of all errors raised by the lab.

    Attributes:
        exit_code (int): The exit code the CLI uses when this error escapes a command.
    """
    exit_code: int = 1


class InputError(LabError, ValueError):
    """An input violates the documented preconditions of an operation."""
    exit_code = 2


class SpecValidationError(InputError):
    """A JSON document (measure, interval set, Cantor spec, field, config) is malformed.

    Attributes:
        path (str|None): JSON path of the offending entry, e.g. `segments[2]`.
        line (int|None): Line of the offending entry in the source document.
        column (int|None): Column of a syntax error.
    """
    def __init__(self, message: str, path: Optional[str]=None, line: Optional[int]=None, column: Optional[int]=None):
        self.path = path
        self.line = line
        self.column = column

        location = []
        if line is not None:
            location.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if path:
            location.append(f"at {path}")

        super().__init__(f"{message} ({'; '.join(location)})" if location else message)


class DomainError(InputError):
    """A function was evaluated outside its domain (e.g. a quantile at r <= 0)."""


class MassMismatchError(InputError):
    """Two measures that must carry equal mass do not."""


class EmptyMeasureError(InputError):
    """An operation produced or received a measure with no mass."""


class DepthExceededError(InputError):
    """A Cantor construction was requested deeper than the configured limit."""


class BaseMismatchError(InputError):
    """Two measure fields do not share the same base measure."""


class LipschitzError(InputError):
    """A potential expected to be 1-Lipschitz and continuous is not."""


class SubmeasureError(InputError):
    """A measure expected to lie below another one does not."""


class NotSymmetricFieldError(InputError):
    """Symmetric truncation was applied to a field with a non-symmetric fiber."""


class GridTooNarrowError(InputError):
    """A grid potential cannot be shifted by the requested scale."""


class NotInSetError(InputError):
    """A point expected to lie in a set does not."""


class NumericError(LabError, ArithmeticError):
    """A numerical cross-check or certified bound failed."""
    exit_code = 3


class CrossCheckError(NumericError):
    """Two independent computation routes disagree beyond tolerance."""


class SeparationError(NumericError):
    """A coarse porous set violates its separation dichotomy."""


class BoundViolationError(NumericError):
    """A certified inequality does not hold on computed values."""


class AcceptanceFailure(LabError):
    """One or more acceptance criteria failed.

    Attributes:
        failed (list[str]): Names of the failed criteria.
    """
    exit_code = 1

    def __init__(self, failed: list[str]):
        self.failed = list(failed)
        super().__init__(f"Acceptance criteria failed: {', '.join(self.failed)}")
