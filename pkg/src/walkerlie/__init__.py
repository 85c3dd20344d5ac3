"""Lie point-symmetry analysis of the Einstein-Walker PDE system."""

__version__ = "0.1.0"
