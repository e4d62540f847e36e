"""Exact log Hochschild and cyclic homology."""

__version__ = "0.1.0"
