"""Upwind summation-by-parts operators and a flux-splitting DG solver."""

__version__ = "0.1.0"
