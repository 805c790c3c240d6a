"""Ensembles of nested dichotomies with multiple subset evaluation."""

__version__ = "0.1.0"
