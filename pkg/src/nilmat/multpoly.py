"""Right-multiplication polynomials ``q^{(j)}`` recovered by exact interpolation.

``action_polys(pres, j)`` returns polynomials ``q_1, ..., q_n`` with

    x_1^{e_1} ... x_n^{e_n} * x_j^{-1} = x_1^{q_1(e)} ... x_n^{q_n(e)}

for every integer vector ``e``.  They are fitted against the collector: the
prefix ``x_1 .. x_{j-1}`` is untouched by the product, so the correction
``q_i - x_i`` is interpolated in ``x_j .. x_{i-1}`` only, on a downward-closed
lattice of sample points (Newton forward differences, no linear solve).  The
lattice is bounded in weighted degree, a generator's weight being its depth
in the commutator structure of the presentation; the bound is raised until two
consecutive fits agree and the result matches the collector at random points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .collect import collector_for, unit
from .polyarith import Polynomial, binomial_poly, coordinates
from .presentation import NilpotentPresentation


class DegreeCapExceeded(RuntimeError):
    """Interpolation did not stabilise below the degree cap."""


class InterpolationError(RuntimeError):
    """Fitted polynomials disagree with the collector."""


@dataclass(frozen=True)
class ActionPolys:
    j: int
    polys: tuple[Polynomial, ...]
    k: int = 1
    degree: int = 0  # weighted degree at which the fit stabilised

    @property
    def n(self) -> int:
        return len(self.polys)

    def qbar(self, i: int) -> Polynomial:
        """Correction term ``q_i - x_i``."""
        return self.polys[i - 1] - Polynomial.var(self.n, i)

    def evaluate(self, point: Sequence[int]) -> tuple:
        return tuple(p.evaluate(point) for p in self.polys)


def weights(pres: NilpotentPresentation) -> tuple[int, ...]:
    """Smallest weights with ``w(k) >= w(i) + w(j)`` whenever ``x_k`` occurs in a tail of ``x_i^{x_j}``."""
    w = [1] * (pres.n + 1)
    # k > i > j, so processing by ascending k sees final w[i], w[j]
    for i, j, k in sorted([*pres.conj_pos, *pres.conj_neg], key=lambda t: t[2]):
        w[k] = max(w[k], w[i] + w[j])
    return tuple(w[1:])


def _lower_set(wts: Sequence[int], bound: int) -> list[tuple[int, ...]]:
    """All exponent tuples with weighted degree at most ``bound``."""
    out: list[tuple[int, ...]] = []
    v = len(wts)

    def rec(idx: int, prefix: list[int], budget: int) -> None:
        if idx == v:
            out.append(tuple(prefix))
            return
        for a in range(budget // wts[idx] + 1):
            prefix.append(a)
            rec(idx + 1, prefix, budget - a * wts[idx])
            prefix.pop()

    rec(0, [], bound)
    return out


def _newton_coefficients(values: dict[tuple[int, ...], int], nvar: int) -> dict[tuple[int, ...], int]:
    """Forward differences ``Delta^a f(0)`` on a downward-closed point set."""
    f = dict(values)
    for t in range(nvar):
        g = {}
        for a in f:
            at = a[t]
            s = 0
            for b in range(at + 1):
                s += (-1) ** (at - b) * comb(at, b) * f[a[:t] + (b,) + a[t + 1:]]
            g[a] = s
        f = g
    return {a: c for a, c in f.items() if c}


def _binomial_basis_poly(n: int, var_offset: int, coeffs: dict[tuple[int, ...], int]) -> Polynomial:
    """``sum c_a prod binomial(x_{var_offset + t}, a_t)`` as a polynomial in ``n`` variables."""
    cache: dict[tuple[int, int], Polynomial] = {}
    out = Polynomial.zero(n)
    for a, c in coeffs.items():
        term = Polynomial.constant(n, c)
        for t, at in enumerate(a):
            if at:
                key = (var_offset + t, at)
                if key not in cache:
                    cache[key] = binomial_poly(n, *key)
                term = term * cache[key]
        out = out + term
    return out


def action_polys(pres: NilpotentPresentation, j: int, degree_cap: int | None = None,
                 verify_points: int = 200, seed: int = 0) -> ActionPolys:
    """Polynomials for right multiplication by ``x_j^-1``, checked against collection."""
    return _action_polys(pres, j, degree_cap, verify_points, seed)


@lru_cache(maxsize=512)
def _action_polys(pres: NilpotentPresentation, j: int, degree_cap: int | None,
                  verify_points: int, seed: int) -> ActionPolys:
    n = pres.n
    if not 1 <= j <= n:
        raise ValueError(f"generator index {j} out of range 1..{n}")
    cap = degree_cap if degree_cap is not None else 2 * n
    col = collector_for(pres)
    step = unit(pres, j, -1)
    wts = weights(pres)
    var_idx = list(range(j, n))  # 1-based variables x_j .. x_{n-1}
    var_w = [wts[k - 1] for k in var_idx]
    xs = coordinates(n)
    values: dict[tuple[int, ...], tuple[int, ...]] = {}
    previous: list[Polynomial] | None = None
    rejected = False
    rng = random.Random(seed * 1_000_003 + j)
    for bound in range(1, cap + 1):
        for a in _lower_set(var_w, bound):
            if a not in values:
                point = [0] * n
                for k, e in zip(var_idx, a):
                    point[k - 1] = e
                values[a] = col.multiply(point, step)
        qbars: list[Polynomial] = []
        for i in range(j, n + 1):
            nv = i - j  # variables x_j .. x_{i-1}
            # sample points have x_i = 0, so q_i - x_i is just the i-th output
            sub = {a[:nv]: values[a][i - 1] for a in values if not any(a[nv:])}
            qbars.append(_binomial_basis_poly(n, j, _newton_coefficients(sub, nv)))
        if previous is not None and qbars == previous:
            polys = tuple(xs[:j - 1]) + tuple(xs[i - 1] + qbars[i - j] for i in range(j, n + 1))
            if _verify(pres, j, polys, verify_points, rng):
                return ActionPolys(j, polys, 1, bound - 1)
            rejected = True
        previous = qbars
    if rejected:
        raise InterpolationError(f"stable fit for x{j}^-1 disagrees with the collector")
    raise DegreeCapExceeded(
        f"action polynomials for x{j}^-1 did not stabilise below weighted degree {cap}")


def _verify(pres: NilpotentPresentation, j: int, polys: Sequence[Polynomial], trials: int,
            rng: random.Random, box: int = 8) -> bool:
    col = collector_for(pres)
    step = unit(pres, j, -1)
    for _ in range(trials):
        p = [rng.randint(-box, box) for _ in range(pres.n)]
        if tuple(q.evaluate(p) for q in polys) != col.multiply(p, step):
            return False
    return True


def all_action_polys(pres: NilpotentPresentation) -> list[ActionPolys]:
    return [action_polys(pres, j) for j in range(1, pres.n + 1)]


def action_polys_pow(pres: NilpotentPresentation, j: int, k: int) -> ActionPolys:
    """Polynomials for right multiplication by ``x_j^-k``, by ``k``-fold composition."""
    if k < 1:
        raise ValueError("power k must be >= 1")
    return _action_polys_pow(pres, j, k)


@lru_cache(maxsize=512)
def _action_polys_pow(pres: NilpotentPresentation, j: int, k: int) -> ActionPolys:
    base = action_polys(pres, j)
    if k == 1:
        return base
    prev = _action_polys_pow(pres, j, k - 1)
    polys = tuple(p.substitute(base.polys) for p in prev.polys)
    return ActionPolys(j, polys, k, base.degree)


def structure_violations(ap: ActionPolys) -> list[str]:
    """Check the triangular shape of ``q^{(j)}``; returns human-readable violations."""
    n, j, k = ap.n, ap.j, ap.k
    xs = coordinates(n)
    problems = []
    for i in range(1, n + 1):
        q = ap.polys[i - 1]
        if i < j and q != xs[i - 1]:
            problems.append(f"q{i} should be x{i}, got {q}")
        elif i == j and q != xs[i - 1] - k:
            problems.append(f"q{i} should be x{i} - {k}, got {q}")
        elif i > j:
            extra = ap.qbar(i).variables()
            if any(v >= i for v in extra):
                problems.append(f"q{i} - x{i} involves {sorted(extra)}, not only x1..x{i - 1}")
    return problems


@dataclass(frozen=True)
class TermCounts:
    m: int
    table: dict[tuple[int, int], int]  # (i, j) -> number of terms of q_i - x_i, for i > j


def qbar_term_count(pres: NilpotentPresentation) -> TermCounts:
    table: dict[tuple[int, int], int] = {}
    for j in range(1, pres.n + 1):
        ap = action_polys(pres, j)
        for i in range(j + 1, pres.n + 1):
            table[(i, j)] = len(ap.qbar(i))
    return TermCounts(max([1, *table.values()]), table)
