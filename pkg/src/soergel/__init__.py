"""Exact computations around Coxeter groups and their bimodule categories:
equivariant multiplicities in the nil Hecke ring, Bott-Samelson stalks with
local intersection forms, hard Lefschetz / Hodge-Riemann verification after
specialisation, moment-graph sheaves on the projective line, and Jantzen
filtration layers from Shapovalov forms."""

from .coxeter import CoxeterGroup, Realisation
from .nilhecke import NilHecke, NilHeckeElement
from .bimodule import BottSamelson, build_factorization
from .polynomial import Poly, RatFunc, UniPoly, sturm_roots_in_interval
from . import hodge, p1sheaf, jantzen

__all__ = [
    "CoxeterGroup", "Realisation", "NilHecke", "NilHeckeElement",
    "BottSamelson", "build_factorization", "Poly", "RatFunc", "UniPoly",
    "sturm_roots_in_interval", "hodge", "p1sheaf", "jantzen",
]
