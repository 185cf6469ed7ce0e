"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial in ``nvars`` variables ``x1 .. xn`` is stored as a dict mapping
exponent tuples to nonzero :class:`~fractions.Fraction` coefficients.  Monomials
are compared in reverse lexicographic order: the exponent of the *last*
variable is compared first, so ``x1 < x2 < ... < xn`` and ``x1**100 < x2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


class DimensionError(ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


def revlex_key(mono: Monomial) -> Monomial:
    """Sort key realising the reverse lexicographic order."""
    return mono[::-1]


def revlex_compare(a: Monomial, b: Monomial) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise DimensionError(f"monomials of length {len(a)} and {len(b)}")
    for ka, kb in zip(reversed(a), reversed(b)):
        if ka != kb:
            return -1 if ka < kb else 1
    return 0


class Polynomial:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.nvars = nvars
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != nvars:
                    raise DimensionError(f"monomial {mono} in a ring with {nvars} variables")
                if any(k < 0 for k in mono):
                    raise ValueError(f"negative exponent in {mono}")
                if c:
                    clean[tuple(mono)] = Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Polynomial":
        """The coordinate ``x_i`` (1-based index)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable x{i} out of range for {nvars} variables")
        mono = [0] * nvars
        mono[i - 1] = 1
        return cls._raw(nvars, {tuple(mono): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Sequence[int], c: Scalar = 1) -> "Polynomial":
        return cls(len(mono), {tuple(mono): c})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending reverse lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: revlex_key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def coeff(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=revlex_key)

    def leading_coeff(self) -> Fraction:
        return self._terms[self.leading_monomial()]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def variables(self) -> set[int]:
        """1-based indices of the variables that occur."""
        return {i + 1 for m in self._terms for i, k in enumerate(m) if k}

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if other.nvars != self.nvars:
            raise DimensionError(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def monic(self) -> "Polynomial":
        return self.scale(1 / self.leading_coeff())

    # -- evaluation and composition ----------------------------------------

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionError(f"point of length {len(point)} for {self.nvars} variables")
        total = Fraction(0)
        for mono, c in self._terms.items():
            v = c
            for x, k in zip(point, mono):
                if k:
                    v *= x**k
            total += v
        return total

    def substitute(self, args: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace ``x_i`` by ``args[i-1]``."""
        if len(args) != self.nvars:
            raise DimensionError(f"{len(args)} substitutions for {self.nvars} variables")
        if not args:
            return Polynomial.constant(0, self.coeff(()))
        target = args[0].nvars
        for a in args:
            if a.nvars != target:
                raise DimensionError("substituted polynomials disagree on nvars")
        powers: list[dict[int, Polynomial]] = [{} for _ in args]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            if k not in cache:
                if k == 1:
                    cache[1] = args[i]
                elif k % 2 == 0:
                    half = power(i, k // 2)
                    cache[k] = half * half
                else:
                    cache[k] = power(i, k - 1) * args[i]
            return cache[k]

        out: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            term: Polynomial | None = None
            for i, k in enumerate(mono):
                if k:
                    p = power(i, k)
                    term = p if term is None else term * p
            if term is None:
                term = Polynomial.constant(target, 1)
            for m, v in term._terms.items():
                s = out.get(m, 0) + c * v
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(target, out)

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {render(self)!r})"


def leading_monomial(f: Polynomial) -> Monomial:
    return f.leading_monomial()


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    return f + g


def scale(f: Polynomial, c: Scalar) -> Polynomial:
    return f.scale(c)


def substitute(f: Polynomial, args: Sequence[Polynomial]) -> Polynomial:
    return f.substitute(args)


def coordinates(nvars: int) -> list[Polynomial]:
    """The coordinate functions ``x1, ..., xn``."""
    return [Polynomial.var(nvars, i) for i in range(1, nvars + 1)]


def binomial_poly(nvars: int, i: int, k: int) -> Polynomial:
    """``binomial(x_i, k) = x_i (x_i - 1) ... (x_i - k + 1) / k!``."""
    x = Polynomial.var(nvars, i)
    out = Polynomial.constant(nvars, 1)
    for r in range(k):
        out = out * (x - r)
    fact = 1
    for r in range(2, k + 1):
        fact *= r
    return out.scale(Fraction(1, fact))


# ---------------------------------------------------------------------------
# textual syntax:  (3/2)*x1^2*x3 - x2 + 1

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


def render(f: Polynomial, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = [f"x{i}" for i in range(1, f.nvars + 1)]
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for mono, c in f.items():
        factors = []
        for name, k in zip(names, mono):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def parse_polynomial(text: str, nvars: int, names: Sequence[str] | None = None) -> Polynomial:
    """Parse the syntax produced by :func:`render` (plus parentheses and ``/``)."""
    if names is None:
        names = [f"x{i}" for i in range(1, nvars + 1)]
    index = {name: i + 1 for i, name in enumerate(names)}
    tokens: list[str] = []
    for m in _TOKEN.finditer(text):
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok and not tok.isspace():
            tokens.append(tok)
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'} at token {pos} in {text!r}")
        pos += 1
        return tok

    def expr() -> Polynomial:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term().scale(sign)
        while peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
            acc = acc + term().scale(sign)
        return acc

    def term() -> Polynomial:
        acc = factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = factor()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ValueError("division by a non-constant or zero")
                acc = acc.scale(1 / rhs.coeff((0,) * nvars))
        return acc

    def factor() -> Polynomial:
        base = atom()
        if peek() == "^":
            take()
            tok = take()
            if not tok.isdigit():
                raise ValueError(f"bad exponent {tok!r}")
            base = base ** int(tok)
        return base

    def atom() -> Polynomial:
        tok = take()
        if tok == "(":
            inner = expr()
            take(")")
            return inner
        if tok == "-":
            return -atom()
        if tok.isdigit():
            return Polynomial.constant(nvars, int(tok))
        if tok in index:
            return Polynomial.var(nvars, index[tok])
        raise ValueError(f"unknown symbol {tok!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input at token {pos} in {text!r}")
    return result


def from_terms(nvars: int, terms: Iterable[tuple[Monomial, Scalar]]) -> Polynomial:
    out: Dict[Monomial, Fraction] = {}
    for m, c in terms:
        out[m] = out.get(m, Fraction(0)) + Fraction(c)
    return Polynomial(nvars, out)
