"""Monotone lattice paths in a strip: enumeration, coral PIP, slow mixing."""

__version__ = "0.1.0"
