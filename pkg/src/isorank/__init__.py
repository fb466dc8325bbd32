"""Isotropic ranks and decompositions of harmonic polynomials."""

__version__ = "0.1.0"
