"""Equivariant rational homology of the tropical moduli spaces Delta_{2,n}."""

__version__ = "0.1.0"
