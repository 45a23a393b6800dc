"""Reproducible benchmark suite for household energy forecasting and explanation."""

__version__ = "0.1.0"
