"""Exact and numerical checks of spectral rigidity for perturbed Jacobi equations."""

__version__ = "0.1.0"
