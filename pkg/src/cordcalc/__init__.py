"""Degree-zero knot contact homology of braid closures."""

__version__ = "0.1.0"
