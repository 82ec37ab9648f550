"""Koszul homology, Golod invariants and a truncated minimal free resolution of the residue field of a graded ring."""

__version__ = '1.0.0'
