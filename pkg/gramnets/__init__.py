"""Generative ratio matching: jointly trained generator and density-ratio critic."""

__version__ = "1.0.0"
