"""Interval reasoning over imprecise conditional probabilities."""

__version__ = "0.1.0"
