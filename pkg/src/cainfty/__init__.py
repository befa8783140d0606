"""Exact verification kernel for curved A-infinity algebras and their bar/cobar constructions."""

__version__ = "0.1.0"
