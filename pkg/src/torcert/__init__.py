"""Exact lattice computations certifying rationality obstructions for
algebraic tori and conic-bundle surfaces."""

__version__ = "0.1.0"
