"""Numerical laboratory for mixed joint discrete universality of zeta-functions."""

__version__ = "0.1.0"
