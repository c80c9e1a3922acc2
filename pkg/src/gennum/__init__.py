"""Computational kernel for Robinson-Colombeau generalized numbers."""

__version__ = "0.1.0"
