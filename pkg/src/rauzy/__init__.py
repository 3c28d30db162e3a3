"""Rauzy graphs, Rauzy schemes and their deterministic evolution."""

__version__ = "0.1.0"
