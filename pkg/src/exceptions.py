"""Error types raised across the solver library and the benchmark harness."""

from pathlib import Path
from typing import Optional


class QapError(Exception):
    """Base class for all library errors."""


class ContractViolationError(QapError, ValueError):
    """An operation was called with arguments outside its contract."""


class QaplibFormatError(QapError, ValueError):
    def __init__(self, expected: int, found: int) -> None:
        self.expected = expected
        self.found = found
        super().__init__(f"QAPLIB format error: expected {expected} tokens, found {found}")


class QaplibParseError(QapError, ValueError):
    def __init__(self, position: int, token: str) -> None:
        self.position = position
        self.token = token
        super().__init__(f"QAPLIB parse error: non-numeric token {token!r} at position {position}")


class InvalidSizeError(QapError, ValueError):
    """Instance size below the smallest legal QAP (n >= 2)."""


class MissingMatrixError(QapError, ValueError):
    """The linear allocation-cost matrix was required but is absent."""


class InstanceTooLargeError(QapError, ValueError):
    """Exhaustive enumeration refused for the instance size."""


class ConfigurationError(QapError, ValueError):
    """Invalid solver, detector or experiment configuration."""


class InsufficientDataError(QapError, ValueError):
    """Not enough samples to compute a statistic."""


class UndefinedCoefficientOfVariationError(QapError, ValueError):
    """A window has zero mean but non-zero spread."""


class TraceFormatError(QapError, ValueError):
    def __init__(self, path: Optional[Path], reason: str) -> None:
        self.path = path
        super().__init__(f"Corrupt trace file {path}: {reason}" if path else f"Corrupt trace: {reason}")
