"""
Domain errors.

Invalid measurements are normally reported as data (see the validity
reports in src.schemas); these exceptions are for operations whose
preconditions do not hold.
"""
from typing import Optional


class PovmError(Exception):
    """Root of every error raised by the toolkit."""


# --- Bloch calculus / matrix oracle ------------------------------------
class NotHermitian(PovmError):
    pass


class NotAState(PovmError):
    pass


class NotPositive(PovmError):
    pass


class ZeroElement(PovmError):
    pass


class InvalidSet(PovmError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InvalidState(PovmError):
    pass


class ProbabilityOutOfRange(PovmError):
    pass


# --- Discrimination ----------------------------------------------------
class NotPure(PovmError):
    pass


class AngleOutOfRange(PovmError):
    pass


class NoFeasible(PovmError):
    pass


# --- Figures -----------------------------------------------------------
class FigureError(PovmError):
    pass


# --- Documents ---------------------------------------------------------
class DocumentError(PovmError):
    pass


class ParseError(DocumentError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class SchemaError(DocumentError):
    pass


class DocumentValidationError(DocumentError):
    pass
