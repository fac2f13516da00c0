"""Exact intersection theory for local snc del Pezzo surfaces."""

__version__ = "0.1.0"
