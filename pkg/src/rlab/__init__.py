"""Explicit Ramanujan graphs and complexes, with exact expansion checks at desk scale."""

__version__ = "0.1.0"
