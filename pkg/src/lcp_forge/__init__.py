"""Exact and certified computations for simple locally conformally product structures."""

__version__ = "0.1.0"
