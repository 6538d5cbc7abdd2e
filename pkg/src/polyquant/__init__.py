"""Exact desk-scale computations for polysymplectic prequantization."""

__version__ = "0.1.0"
