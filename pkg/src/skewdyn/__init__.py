"""Exact and numeric dynamics of one-parameter families of polynomial skew products."""

__version__ = "0.1.0"
