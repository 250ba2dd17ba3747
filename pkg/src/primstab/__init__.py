"""Primitive stability of rank-2 free group representations into Isom(H^d)."""

__version__ = "0.1.0"
