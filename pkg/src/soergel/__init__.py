"""Hecke algebra and Soergel bimodule calculus with exact arithmetic."""

__version__ = "0.1.0"
