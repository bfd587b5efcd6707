"""Exact fixed-point statistics of random permutations."""

__version__ = "0.1.0"
