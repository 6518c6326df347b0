"""Geometric measures of non-classical correlations for two-mode Gaussian states."""

__version__ = "0.1.0"
