"""
Standard exception types for reporting errors.

The exception classes defined here provide a method which will return an outcome mapping, and a
class-level exit code that the command-line interface uses as the process exit status.
"""

from abc import ABC, abstractmethod
from typing import Dict, Union

from .utils import make_outcome


class FTCException(Exception, ABC):
    """
    Abstract base class for all ftclabels exceptions.

    Concrete subclasses supply an exit code (see the families below) and, optionally, a more
    specific outcome code.
    """

    _CODE = "exception"

    def __init__(self, details_text: Union[str, None] = None) -> None:
        super().__init__(details_text)
        self.details_text = details_text or ""

    @classmethod
    @abstractmethod
    def exit_code(cls) -> int:
        raise NotImplementedError

    def outcome(self) -> Dict[str, str]:
        return make_outcome(
            severity="error", code=self._CODE, details_text=self.details_text
        )


class FTCUsageError(FTCException):
    """Abstract base class for errors in how the package was invoked or configured."""

    @classmethod
    def exit_code(cls) -> int:
        return 1


class FTCValidationError(FTCException):
    """
    Abstract base class for errors caused by invalid input documents or queries.

    The family exits with 2. The failures a query can run into get their own codes: 4 for an
    unknown edge or vertex, 5 for a fault set over budget and 6 for labels from another graph.
    """

    @classmethod
    def exit_code(cls) -> int:
        return 2


class FTCInvariantError(FTCException):
    """
    Abstract base class for internal invariant violations.

    These never result from bad input when the labels were built by this package; they indicate a
    broken hierarchy, a corrupted store that passed format checks, or a bug.
    """

    @classmethod
    def exit_code(cls) -> int:
        return 3


class ConfigError(FTCUsageError):
    """Invalid scheme configuration or command-line flags."""

    _CODE = "usage"


class GraphParseError(FTCValidationError):
    """Malformed line in an edge-list document."""

    _CODE = "structure"

    def __init__(self, line_number: int, details_text: str) -> None:
        super().__init__(f"line {line_number}: {details_text}")
        self.line_number = line_number


class GraphValidationError(FTCValidationError):
    """Self-loop, duplicate edge, out-of-range vertex, or disconnected graph."""

    _CODE = "invariant"


class FaultSetError(FTCValidationError):
    """Invalid fault set. Raised as is for a fault set that repeats an edge."""

    _CODE = "value"


class UnknownElementError(FaultSetError):
    """Fault that is not an edge of the graph, or a query vertex outside it."""

    _CODE = "not-found"

    @classmethod
    def exit_code(cls) -> int:
        return 4


class FaultBudgetError(FaultSetError):
    """More faults than the label set was built for."""

    _CODE = "too-long"

    @classmethod
    def exit_code(cls) -> int:
        return 5


class LabelMismatchError(FTCValidationError):
    """Labels that do not belong to the same label set, or a store applied to the wrong graph."""

    _CODE = "conflict"

    @classmethod
    def exit_code(cls) -> int:
        return 6


class StoreFormatError(FTCValidationError):
    """Label store that cannot be read."""

    _CODE = "structure"


class DecoderOverflowError(FTCInvariantError):
    """The syndrome decoder overflowed where the hierarchy guarantees that it cannot."""

    _CODE = "exception"


class FieldArithmeticError(FTCInvariantError):
    """Undefined field operation, such as inverting zero."""

    _CODE = "exception"
