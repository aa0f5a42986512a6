"""Cone and paraboloid point detection from content-weighted beta numbers."""

__version__ = "0.1.0"
