"""JSON-ready views of presentations, polynomials, bases and matrices.

Rationals are written as strings ``"p/q"`` (``"p"`` when the denominator is 1)
so reports round-trip exactly.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from fractions import Fraction
from typing import Any

from .basis import PolyBasis
from .matrep import FaithfulnessReport, MatrixRep, RelationReport, UnitriangularReport
from .multpoly import ActionPolys
from .polyarith import Polynomial, render


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def poly_json(f: Polynomial, names=None) -> dict[str, Any]:
    return {
        "text": render(f, names),
        "terms": [[list(m), frac_str(c)] for m, c in f.items()],
    }


def poly_from_json(obj: dict[str, Any], nvars: int) -> Polynomial:
    return Polynomial(nvars, {tuple(m): parse_frac(c) for m, c in obj["terms"]})


def matrix_json(M) -> list[list[str]]:
    return [[frac_str(x) for x in row] for row in M]


def matrix_from_json(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(parse_frac(x) for x in row) for row in rows)


def action_polys_json(ap: ActionPolys, names=None) -> dict[str, Any]:
    return {"j": ap.j, "k": ap.k, "degree": ap.degree, "polys": [poly_json(p, names) for p in ap.polys]}


def basis_json(B: PolyBasis, names=None, counts: bool = False) -> dict[str, Any]:
    out: dict[str, Any] = {
        "dimension": len(B),
        "basis": [poly_json(b, names) for b in B.elems],
    }
    if counts:
        out["insert_count"] = B.insert_count
        out["reduction_steps"] = B.reduction_steps
    return out


def rep_json(rep: MatrixRep) -> dict[str, Any]:
    return {
        "dimension": rep.dim,
        "generators": list(rep.names),
        "basis": [poly_json(b, rep.names) for b in rep.basis],
        "matrices": {name: matrix_json(M) for name, M in zip(rep.names, rep.mats)},
    }


def rep_from_json(obj: dict[str, Any]) -> MatrixRep:
    names = tuple(obj["generators"])
    n = len(names)
    basis = tuple(poly_from_json(b, n) for b in obj["basis"])
    mats = tuple(matrix_from_json(obj["matrices"][name]) for name in names)
    return MatrixRep(obj["dimension"], mats, basis, names)


def relation_report_json(r: RelationReport) -> dict[str, Any]:
    return {"passed": r.passed, "checked": r.checked, "failures": [list(f) for f in r.failures]}


def faithfulness_json(r: FaithfulnessReport) -> dict[str, Any]:
    out = asdict(r)
    out["passed"] = r.passed
    return out


def unitriangular_json(r: UnitriangularReport) -> dict[str, Any]:
    out = asdict(r)
    out["reversal"] = list(r.reversal)
    out["passed"] = r.passed
    return out


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
