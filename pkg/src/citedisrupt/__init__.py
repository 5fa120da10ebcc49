"""Disruption index, citation-weighted disruption, and corpus-dilution tools."""

__version__ = "0.1.0"
