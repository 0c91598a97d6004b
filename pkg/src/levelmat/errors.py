"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LevelmatError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(LevelmatError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class RingMismatchError(LevelmatError):
    pass


class ShapeError(LevelmatError):
    """Matrix dimensions do not fit the requested operation."""


class CharacteristicError(LevelmatError):
    """A coefficient is not invertible in the chosen field."""


class ContractViolation(LevelmatError):
    """An internally certified identity failed; indicates a bug, never user error."""


class ResourceLimitError(LevelmatError):
    def __init__(self, message: str, stats: dict | None = None):
        self.stats = dict(stats or {})
        super().__init__(message)


class CertificationError(LevelmatError):
    def __init__(self, message: str, report: dict | None = None):
        self.report = dict(report or {})
        super().__init__(message)


class ResolutionShapeError(CertificationError):
    """The input ideal is not three-generated of codimension two and projective dimension two."""


class PreconditionError(LevelmatError, ValueError):
    """Input violates a documented precondition of a constructor."""
