"""Exact integer homology toolkit: buildings, Steinberg lattices, frame complexes."""

__version__ = "0.1.0"
