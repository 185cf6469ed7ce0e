"""Matrices of the group action on a closed polynomial basis.

Row ``k`` of the matrix of ``a_j`` holds the coordinates of ``b_k^{a_j}`` in the
basis, so coefficient row vectors are multiplied on the left and
``rho(gh) = rho(g) rho(h)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .basis import PolyBasis, act
from .collect import collect
from .multpoly import action_polys
from .polyarith import Polynomial
from .presentation import NilpotentPresentation, Word

Matrix = tuple[tuple[Fraction, ...], ...]

_INT_LIMIT = 2**62


class NotInSpanError(ValueError):
    """A polynomial expected to lie in the span of the basis does not."""


@dataclass(frozen=True)
class MatrixRep:
    dim: int
    mats: tuple[Matrix, ...]
    basis: tuple[Polynomial, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        for M in self.mats:
            if len(M) != self.dim or any(len(row) != self.dim for row in M):
                raise ValueError("matrix dimensions do not match the basis size")

    @property
    def n(self) -> int:
        return len(self.mats)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for M in self.mats for row in M for x in row)


def decompose(B: PolyBasis, f: Polynomial) -> list[Fraction]:
    """Coefficients of ``f`` in the basis ``B`` (exact)."""
    r, coeffs = B.reduce(f)
    if not r.is_zero():
        raise NotInSpanError(f"residual {r} after reduction; basis is not closed")
    return coeffs


def representation(pres: NilpotentPresentation, B: PolyBasis) -> MatrixRep:
    mats = []
    for j in range(1, pres.n + 1):
        ap = action_polys(pres, j)
        mats.append(tuple(tuple(decompose(B, act(b, ap))) for b in B.elems))
    return MatrixRep(len(B), tuple(mats), tuple(B.elems), pres.names)


# ---------------------------------------------------------------------------
# exact matrix arithmetic; int64 when entry bounds allow, Python objects otherwise


class _Mat:
    __slots__ = ("a", "bound")

    def __init__(self, a: np.ndarray, bound: int | None):
        self.a = a
        self.bound = bound  # max |entry| if integral, None for rational entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction]]) -> "_Mat":
        if all(x.denominator == 1 for row in rows for x in row):
            ints = [[int(x) for x in row] for row in rows]
            bound = max((abs(x) for row in ints for x in row), default=0)
            if bound < _INT_LIMIT:
                return cls(np.array(ints, dtype=np.int64), bound)
            return cls(np.array(ints, dtype=object), bound)
        return cls(np.array([[Fraction(x) for x in row] for row in rows], dtype=object), None)

    @classmethod
    def identity(cls, d: int) -> "_Mat":
        return cls(np.eye(d, dtype=np.int64), 1)

    def __matmul__(self, other: "_Mat") -> "_Mat":
        d = self.a.shape[0]
        if self.bound is not None and other.bound is not None:
            bound = d * self.bound * other.bound
            if bound < _INT_LIMIT and self.a.dtype == np.int64 and other.a.dtype == np.int64:
                prod = self.a @ other.a
                return _Mat(prod, int(np.abs(prod).max()) if prod.size else 0)
            prod = self.a.astype(object) @ other.a.astype(object)
            b = max((abs(int(x)) for x in prod.flat), default=0)
            if b < _INT_LIMIT:
                return _Mat(prod.astype(np.int64), b)
            return _Mat(prod, b)
        return _Mat(_as_frac(self.a) @ _as_frac(other.a), None)

    def rows(self) -> Matrix:
        return tuple(tuple(Fraction(x) for x in row) for row in self.a.tolist())

    def equals(self, other: "_Mat") -> bool:
        if self.a.dtype == np.int64 and other.a.dtype == np.int64:
            return bool(np.array_equal(self.a, other.a))
        return self.rows() == other.rows()

    def is_identity(self) -> bool:
        return self.equals(_Mat.identity(self.a.shape[0]))


def _as_frac(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    return a.astype(object)


def mat_inverse(M: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    d = len(M)
    aug = [list(row) + [Fraction(int(r == c)) for c in range(d)] for r, row in enumerate(M)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        if p != 1:
            aug[col] = [x / p for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[d:]) for row in aug)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    return (_Mat.from_rows(A) @ _Mat.from_rows(B)).rows()


def identity_matrix(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(r == c)) for c in range(d)) for r in range(d))


class WordImages:
    """Caches generator powers to evaluate words quickly."""

    def __init__(self, rep: MatrixRep):
        self.rep = rep
        self._gen = [_Mat.from_rows(M) for M in rep.mats]
        self._inv = [_Mat.from_rows(mat_inverse(M)) for M in rep.mats]
        self._powers: dict[tuple[int, int], _Mat] = {}

    def power(self, g: int, e: int) -> _Mat:
        key = (g, e)
        if key not in self._powers:
            base = self._gen[g - 1] if e > 0 else self._inv[g - 1]
            k = abs(e)
            result = _Mat.identity(self.rep.dim)
            while k:
                if k & 1:
                    result = result @ base
                k >>= 1
                if k:
                    base = base @ base
            self._powers[key] = result
        return self._powers[key]

    def image(self, w: Word) -> _Mat:
        result = _Mat.identity(self.rep.dim)
        for g, e in w.letters:
            if not 1 <= g <= self.rep.n:
                raise ValueError(f"generator index {g} out of range")
            result = result @ self.power(g, e)
        return result


def image_of_word(rep: MatrixRep, w: Word) -> Matrix:
    return WordImages(rep).image(w).rows()


# ---------------------------------------------------------------------------
# verification reports


@dataclass
class RelationReport:
    checked: int = 0
    failures: list[tuple[int, int, int]] = field(default_factory=list)  # (i, j, sign)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_relations(pres: NilpotentPresentation, rep: MatrixRep) -> RelationReport:
    """Check ``rho(x_j)^-s rho(x_i) rho(x_j)^s = rho(x_i * tail)`` for every relation."""
    images = WordImages(rep)
    report = RelationReport()
    for i, j, sign, tail in pres.relations():
        lhs = Word(((j, -sign), (i, 1), (j, sign)))
        rhs = Word(((i, 1),) + tail)
        report.checked += 1
        if not images.image(lhs).equals(images.image(rhs)):
            report.failures.append((i, j, sign))
    return report


@dataclass
class FaithfulnessReport:
    trials: int
    homomorphism_failures: int = 0
    faithfulness_failures: int = 0
    relator_failures: int = 0
    identity_words: int = 0
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return not (self.homomorphism_failures or self.faithfulness_failures or self.relator_failures)


def random_word(rng: random.Random, n: int, max_len: int, box: int = 5) -> Word:
    length = rng.randint(0, max_len)
    letters = []
    for _ in range(length):
        e = 0
        while e == 0:
            e = rng.randint(-box, box)
        letters.append((rng.randint(1, n), e))
    return Word(tuple(letters))


def verify_faithful_sample(pres: NilpotentPresentation, rep: MatrixRep, trials: int = 1000,
                           max_len: int = 16, seed: int = 0, box: int = 5) -> FaithfulnessReport:
    """Random-word checks of the homomorphism property and of faithfulness.

    For random words ``u, v``: ``rho(u) rho(v)`` must equal the image of the
    collected normal form of ``uv``; ``rho(u)`` is the identity exactly when ``u``
    collects to the identity; and ``u`` times the inverse of its normal form
    must map to the identity.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    images = WordImages(rep)
    report = FaithfulnessReport(trials)
    for t in range(trials):
        u = random_word(rng, pres.n, max_len, box)
        v = random_word(rng, pres.n, max_len, box)
        iu, iv = images.image(u), images.image(v)
        nf_uv = Word.from_exponents(collect(pres, u * v))
        if not (iu @ iv).equals(images.image(nf_uv)):
            report.homomorphism_failures += 1
            report.first_failure = report.first_failure or f"trial {t}: homomorphism on {u.letters} * {v.letters}"
        nf_u = collect(pres, u)
        is_id = not any(nf_u)
        report.identity_words += is_id
        if iu.is_identity() != is_id:
            report.faithfulness_failures += 1
            report.first_failure = report.first_failure or f"trial {t}: faithfulness on {u.letters}"
        relator = u * Word.from_exponents(nf_u).inverse()
        if not images.image(relator).is_identity():
            report.relator_failures += 1
            report.first_failure = report.first_failure or f"trial {t}: relator {relator.letters}"
    return report


@dataclass
class UnitriangularReport:
    integral: bool
    lower_unitriangular: bool
    upper_unitriangular_reversed: bool
    unit_diagonal: bool
    reversal: tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        return self.integral and (self.lower_unitriangular or self.upper_unitriangular_reversed)


def check_unitriangular(rep: MatrixRep) -> UnitriangularReport:
    d = rep.dim
    integral = rep.is_integral()
    diag = all(M[r][r] == 1 for M in rep.mats for r in range(d))
    lower = diag and all(M[r][c] == 0 for M in rep.mats for r in range(d) for c in range(r + 1, d))
    perm = tuple(range(d - 1, -1, -1))
    upper_rev = diag and all(
        M[perm[r]][perm[c]] == 0 for M in rep.mats for r in range(d) for c in range(r))
    return UnitriangularReport(integral, lower, upper_rev, diag, perm if upper_rev else ())


def is_unipotent(M: Matrix) -> bool:
    """``(M - I)^d == 0`` exactly."""
    d = len(M)
    N = _Mat.from_rows(tuple(tuple(M[r][c] - (r == c) for c in range(d)) for r in range(d)))
    P = N
    for _ in range(d - 1):
        P = P @ N
    return all(x == 0 for x in P.a.flat)
