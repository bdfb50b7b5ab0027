"""Verification, optimization and desk-scale construction for explicit unit-distance lower bounds."""

__version__ = "0.1.0"
