"""Exact symbolic engine for boundary qKZ solutions."""

__version__ = "0.1.0"
