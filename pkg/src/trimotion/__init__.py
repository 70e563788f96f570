"""Exact analysis of planar point sets with few congruent triangle classes."""

__version__ = "0.1.0"
