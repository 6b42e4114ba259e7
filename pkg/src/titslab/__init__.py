"""Exact computations in the Solomon-Tits algebra of the symmetric group."""

__version__ = "0.1.0"
