"""Error types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Raised when a model or instance document is malformed.

    The optional ``path`` locates the offending element inside the JSON
    document, e.g. ``trees[0].threshold``.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class CapacityError(RuntimeError):
    """Raised when a computation would exceed a configured resource bound."""
