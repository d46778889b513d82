"""Exact-arithmetic toolkit for Gelfand-Tsetlin, marked order, and flow polytopes."""

__version__ = "0.1.0"
