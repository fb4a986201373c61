"""Deformations of toric surface singularities over a truncated DVR."""

__version__ = "0.1.0"
