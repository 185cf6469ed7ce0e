"""Unitriangular matrix representations of torsion-free nilpotent groups."""

from .basis import PolyBasis, act, build_basis, build_basis_coordinate, build_basis_general, insert
from .collect import collect, invert, multiply, power
from .matrep import (
    MatrixRep,
    check_unitriangular,
    decompose,
    image_of_word,
    representation,
    verify_faithful_sample,
    verify_relations,
)
from .multpoly import ActionPolys, action_polys, action_polys_pow, qbar_term_count
from .polyarith import Polynomial, revlex_compare
from .presentation import NilpotentPresentation, Word, associativity_check, builtin, parse_presentation, render

__all__ = [
    "ActionPolys", "MatrixRep", "NilpotentPresentation", "PolyBasis", "Polynomial", "Word",
    "act", "action_polys", "action_polys_pow", "associativity_check", "build_basis",
    "build_basis_coordinate", "build_basis_general", "builtin", "check_unitriangular", "collect",
    "decompose", "image_of_word", "insert", "invert", "multiply", "parse_presentation", "power",
    "qbar_term_count", "render", "representation", "revlex_compare", "verify_faithful_sample",
    "verify_relations",
]
