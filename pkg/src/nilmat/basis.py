"""Span test (Insert) and the two module-basis constructions.

The basis is kept in reduced echelon form: elements are monic, sorted by
ascending leading monomial (reverse lexicographic order), and no element
contains the leading monomial of another.  With that invariant a single pass
in descending order computes the full normal form of a polynomial.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .multpoly import ActionPolys, action_polys, qbar_term_count
from .polyarith import DimensionError, Monomial, Polynomial, coordinates, revlex_key
from .presentation import NilpotentPresentation


class ModuleClosureError(RuntimeError):
    """Basis construction diverged or produced a span that is not G-invariant."""


@dataclass
class PolyBasis:
    nvars: int
    elems: list[Polynomial] = field(default_factory=list)
    insert_count: int = 0
    reduction_steps: int = 0
    _keys: list[Monomial] = field(default_factory=list, repr=False)

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def leading_monomials(self) -> list[Monomial]:
        return [k[::-1] for k in self._keys]

    def reduce(self, f: Polynomial) -> tuple[Polynomial, list[Fraction]]:
        """Normal form of ``f`` and the coefficients of the subtracted basis elements."""
        if f.nvars != self.nvars:
            raise DimensionError(f"{f.nvars} variables, basis has {self.nvars}")
        coeffs = [Fraction(0)] * len(self.elems)
        r = f
        for idx in range(len(self.elems) - 1, -1, -1):
            c = r.coeff(self._keys[idx][::-1])
            if c:
                coeffs[idx] = c
                r = r - self.elems[idx].scale(c)
        return r, coeffs

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f)[0].is_zero()

    def insert(self, f: Polynomial) -> Polynomial:
        """Reduce ``f``; if a nonzero residual remains, add it.  Returns the residual."""
        self.insert_count += 1
        r, coeffs = self.reduce(f)
        self.reduction_steps += sum(1 for c in coeffs if c)
        if r.is_zero():
            return r
        new = r.monic()
        lead = new.leading_monomial()
        # back-reduce so no other element mentions the new leading monomial
        for idx, b in enumerate(self.elems):
            c = b.coeff(lead)
            if c:
                self.elems[idx] = b - new.scale(c)
        key = revlex_key(lead)
        pos = bisect.bisect_left(self._keys, key)
        self._keys.insert(pos, key)
        self.elems.insert(pos, new)
        return r

    def copy(self) -> "PolyBasis":
        return PolyBasis(self.nvars, list(self.elems), self.insert_count, self.reduction_steps, list(self._keys))


def insert(B: PolyBasis, f: Polynomial) -> Polynomial:
    return B.insert(f)


def act(f: Polynomial, ap: ActionPolys) -> Polynomial:
    """``f^{a_j}``, i.e. ``f`` composed with right multiplication by ``a_j^-1``."""
    return f.substitute(ap.polys)


def dimension_bound(n: int, m: int) -> Fraction:
    return Fraction(m, 2) * n * (n + 1) + 1


def general_insert_bound(n: int, m: int) -> Fraction:
    return n + 1 + Fraction(m + 1, 2) * n * n + Fraction(1 - m, 2) * n


def coordinate_insert_bound(n: int, m: int) -> Fraction:
    return n + 1 + Fraction(m, 2) * n * (n - 1)


def _repeat_cap(n: int, m: int) -> int:
    return int(4 * dimension_bound(n, m)) + 4


def _orbit(B: PolyBasis, f: Polynomial, ap: ActionPolys, cap: int) -> int:
    """Insert ``f^{a}, f^{a^2}, ...`` until one lies in the span; returns additions."""
    added = 0
    for _ in range(cap):
        f = act(f, ap)
        if B.insert(f).is_zero():
            return added
        added += 1
    raise ModuleClosureError(f"module closure diverged under x{ap.j} after {cap} iterations")


def closure_violations(B: PolyBasis, aps: Iterable[ActionPolys]) -> list[tuple[int, int]]:
    """Pairs ``(j, k)`` where ``act(B.elems[k], ap_j)`` leaves the span."""
    bad = []
    for ap in aps:
        for k, b in enumerate(B.elems):
            if not B.contains(act(b, ap)):
                bad.append((ap.j, k))
    return bad


def _check_closed(B: PolyBasis, aps: Sequence[ActionPolys]) -> None:
    bad = closure_violations(B, aps)
    if bad:
        raise ModuleClosureError(f"basis is not closed under the group action: {bad[:5]}")


def build_basis_general(pres: NilpotentPresentation, seeds: Sequence[Polynomial],
                        repeat_cap: int | None = None) -> PolyBasis:
    """Basis of the module generated by ``seeds``: close under ``a_n``, then ``a_{n-1}``, ..."""
    if not seeds:
        raise ValueError("need at least one seed polynomial")
    n = pres.n
    cap = repeat_cap or _repeat_cap(n, qbar_term_count(pres).m)
    B = PolyBasis(n)
    for f in seeds:
        B.insert(f)
    aps = [action_polys(pres, j) for j in range(1, n + 1)]
    for j in range(n, 0, -1):
        ap = aps[j - 1]
        for f in list(B.elems):
            _orbit(B, f, ap, cap)
        _check_closed(B, [ap])
    _check_closed(B, aps)
    return B


def build_basis_coordinate(pres: NilpotentPresentation, repeat_cap: int | None = None,
                           check_closure: bool = True) -> PolyBasis:
    """Basis from the orbits of ``t_i`` under powers of ``a_j`` for ``i > j`` only.

    This skips the images of residual elements that the general construction
    also visits, so the span need not be G-invariant (it is not for UT(5, Z));
    the final closure check raises :class:`ModuleClosureError` unless
    ``check_closure`` is false.
    """
    n = pres.n
    cap = repeat_cap or _repeat_cap(n, qbar_term_count(pres).m)
    ts = coordinates(n)
    B = PolyBasis(n)
    for t in ts:
        B.insert(t)
    aps = [action_polys(pres, j) for j in range(1, n + 1)]
    B.insert(act(ts[n - 1], aps[n - 1]))
    for j in range(n - 1, 0, -1):
        for i in range(j + 1, n + 1):
            _orbit(B, ts[i - 1], aps[j - 1], cap)
    if check_closure:
        _check_closed(B, aps)
    return B


def build_basis(pres: NilpotentPresentation, algorithm: str = "figure2") -> PolyBasis:
    if algorithm == "figure1":
        return build_basis_general(pres, coordinates(pres.n))
    if algorithm == "figure2":
        return build_basis_coordinate(pres)
    raise ValueError(f"unknown algorithm {algorithm!r}; use figure1 or figure2")
