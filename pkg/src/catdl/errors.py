# ♥♥─── Catdl Errors ───────────────────────────────────────
from __future__ import annotations


class CatdlError(Exception):
    """Base class for every error raised by the reasoner."""


class MalformedTermError(CatdlError):
    """Raised when a concept expression cannot be canonicalized."""


class OntologyParseError(CatdlError):
    """Raised on a syntax error in an ontology or query text."""

    def __init__(self, message: str, line: int, column: int) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} (at {line}:{column})")


class InputRejectedError(CatdlError):
    """Raised when an engine is handed input outside the language it decides."""


class UnregisteredObjectError(CatdlError):
    """Raised when an arrow mentions an object the store does not hold."""


class BudgetExceededError(CatdlError):
    """Raised when a run exhausts its step or node budget."""

    def __init__(self, message: str, *, objects: int = 0, arrows: int = 0, nodes: int = 0) -> None:
        self.objects = objects
        self.arrows = arrows
        self.nodes = nodes
        super().__init__(message)


class ClashedStateError(CatdlError):
    """Raised when a model is requested from a tableau that contains a clash."""


class CombinatorialLimitError(CatdlError):
    """Raised when a brute-force search space exceeds the configured cap."""
