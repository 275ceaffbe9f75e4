"""Skein-space evaluation of link invariants, circuit-to-braid compilation, and Potts-model tools."""
from .params import BracketParams

__version__ = "0.1.0"

__all__ = ["BracketParams", "__version__"]
