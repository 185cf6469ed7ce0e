"""Reference implementations that share no code with the package.

Normal forms come from closed forms or from a plain integer-matrix model;
ranks and polynomial identities come from sympy.
"""

from __future__ import annotations

import random
from itertools import combinations

import sympy


def heisenberg_mul(u, v):
    a, b, c = u
    d, e, f = v
    return (a + d, b + e, c + f + b * d)


def fn2_mul(r, u, v):
    """Free class-2 product; commutator c_ab collects x_b^{u_b} past x_a^{v_a}."""
    pairs = list(combinations(range(r), 2))
    out = [u[k] + v[k] for k in range(r)]
    for idx, (a, b) in enumerate(pairs):
        out.append(u[r + idx] + v[r + idx] + u[b] * v[a])
    return tuple(out)


def ut_order(m):
    return sorted(((p, q) for p in range(m) for q in range(p + 1, m)), key=lambda pq: (pq[1] - pq[0], pq[0]))


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def ut_letter(m, p, q, e):
    M = [[int(r == c) for c in range(m)] for r in range(m)]
    M[p][q] = e
    return M


def ut_word_matrix(m, letters):
    """Matrix of a word whose letters are (1-based generator index, exponent)."""
    order = ut_order(m)
    M = [[int(r == c) for c in range(m)] for r in range(m)]
    for g, e in letters:
        p, q = order[g - 1]
        M = _mat_mul(M, ut_letter(m, p, q, e))
    return M


def ut_normal_matrix(m, exps):
    return ut_word_matrix(m, [(g, e) for g, e in enumerate(exps, start=1) if e])


def random_vec(rng: random.Random, n, box=5):
    return tuple(rng.randint(-box, box) for _ in range(n))


def sympy_poly(f, xs):
    """Convert a package Polynomial to a sympy expression via its term map only."""
    expr = sympy.Integer(0)
    for mono, c in f.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for x, e in zip(xs, mono):
            term *= x**e
        expr += term
    return sympy.expand(expr)


def rank(rows):
    return sympy.Matrix(rows).rank() if rows else 0


def orbit_span_rank(pres, collect, n_translates, points, seed=0):
    """Rank of {t_i(h g^-1)} over random translates g, sampled at ``points``.

    The functions t_i^g span the module generated by the coordinate functions,
    so with enough samples this equals its dimension.  Only ``collect`` is used.
    """
    from nilmat.presentation import Word

    rng = random.Random(seed)
    rows = []
    units = [tuple(int(k == j) for k in range(pres.n)) for j in range(pres.n)]
    gs = [()] + units + [random_vec(rng, pres.n, 3) for _ in range(n_translates)]
    for g in gs:
        ginv = Word(tuple((k, -e) for k, e in reversed(list(enumerate(g, start=1))) if e))
        images = [collect(pres, Word.from_exponents(h) * ginv) for h in points]
        for i in range(pres.n):
            rows.append([img[i] for img in images])
    return rank(rows)
