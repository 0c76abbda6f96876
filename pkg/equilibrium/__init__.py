"""Numerical library for Riesz s-equilibrium problems on the real line."""

__version__ = "1.0.0"
