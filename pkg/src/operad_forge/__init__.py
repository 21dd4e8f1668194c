"""Finitely presented category-colored operads over exact rational vector spaces."""

__version__ = "0.1.0"

FORMAT = "operad-forge/1"
