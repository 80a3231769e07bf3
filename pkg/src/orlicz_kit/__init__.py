"""Weighted weak Lebesgue and weak Orlicz quasi-norms on grids, with inclusion-theorem checks."""

__version__ = "0.1.0"
