"""Shared exception types."""

from __future__ import annotations


class HkrError(Exception):
    """Base class for failures raised by this package."""


class CapExceeded(HkrError):
    """A computation hit one of the documented work or size caps."""


class ParseError(HkrError):
    """A group expression could not be parsed."""
