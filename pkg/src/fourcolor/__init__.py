"""Combinatorial-map machinery for 4-coloring planar triangulations."""

__version__ = "0.1.0"
