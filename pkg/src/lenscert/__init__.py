"""Certified enclosures for lens and Lawson-cone competitor energies."""

__version__ = "0.1.0"

from .ball import Ball, TriBool, certainly_less

__all__ = ["Ball", "TriBool", "certainly_less", "__version__"]
