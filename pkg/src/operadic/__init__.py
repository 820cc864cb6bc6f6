"""Symbolic engine for dg-operads and bimodules of homotopy unital
A-infinity algebras and their morphisms, with exact Koszul signs, bounded
machine verification of the structure identities, and an evaluator for
concrete finite-dimensional instances."""

__version__ = "0.1.0"
