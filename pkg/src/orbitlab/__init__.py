"""Numerical laboratory for unimodular completely multiplicative functions."""

__version__ = "0.1.0"

from .errors import InvalidArgument, ReachError  # noqa: F401
