"""Painlevé VI transcendents, monodromy data and 3-dimensional Frobenius manifolds."""

__version__ = "0.1.0"
