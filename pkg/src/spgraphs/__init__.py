"""Exact and asymptotic enumeration of labelled series-parallel, outerplanar
and K_{2,3}-minor-free graphs."""

__version__ = "0.1.0"
