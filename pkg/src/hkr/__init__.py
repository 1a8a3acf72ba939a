"""Exact computations with commuting tuples, formal group laws, and
height-1 character theory on finite groups."""

from __future__ import annotations

__version__ = "0.1.0"
