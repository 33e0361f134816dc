"""Exact finite-scale workbench for vector-valued function spaces."""
__version__ = "0.1.0"
