"""Exact computations with strongly homotopy operads and homotopy transfer."""

__version__ = "0.1.0"
