"""Symbolic bounce dynamics of labeled polygonal billiard tables."""

__version__ = "0.1.0"
