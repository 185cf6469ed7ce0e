"""Nilpotent presentations of torsion-free nilpotent groups.

A presentation on generators ``x_1, ..., x_n`` consists of conjugacy relations

    x_i^{x_j}      = x_i x_{i+1}^{b_{i,j,i+1}} ... x_n^{b_{i,j,n}}
    x_i^{x_j^-1}   = x_i x_{i+1}^{c_{i,j,i+1}} ... x_n^{c_{i,j,n}}

for ``j < i``, with ``a^b = b^-1 a b``.  There are no power relations: every
relative order is infinite.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .collect import Collector, CollectionError, ExponentVector, Letter

Triple = tuple[int, int, int]


class PresentationError(ValueError):
    """Malformed presentation text or parameters."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ExponentTable(Mapping[Triple, int]):
    """Read-only, hashable map ``(i, j, k) -> exponent`` with zeros dropped."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping[Triple, int] | Iterable[tuple[Triple, int]] = ()):
        items = data.items() if isinstance(data, Mapping) else data
        self._data = {tuple(key): int(v) for key, v in items if v}
        self._hash = hash(frozenset(self._data.items()))

    def __getitem__(self, key: Triple) -> int:
        return self._data[key]

    def get(self, key, default=0):
        return self._data.get(key, default)

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._data))

    def __len__(self) -> int:
        return len(self._data)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, ExponentTable):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __repr__(self) -> str:
        return f"ExponentTable({dict(sorted(self._data.items()))})"


@dataclass(frozen=True)
class Word:
    """A word in the generators: ``((index, exponent), ...)``, 1-based indices."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        merged: list[list[int]] = []
        for g, e in self.letters:
            g, e = int(g), int(e)
            if merged and merged[-1][0] == g:
                merged[-1][1] += e
                if merged[-1][1] == 0:
                    merged.pop()
            elif e:
                merged.append([g, e])
        object.__setattr__(self, "letters", tuple((g, e) for g, e in merged))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @classmethod
    def from_exponents(cls, e: Sequence[int]) -> "Word":
        return cls(tuple((k + 1, x) for k, x in enumerate(e) if x))

    def check(self, n: int) -> None:
        for g, _ in self.letters:
            if not 1 <= g <= n:
                raise PresentationError(f"generator index {g} out of range 1..{n}")


@dataclass(frozen=True)
class NilpotentPresentation:
    n: int
    conj_pos: ExponentTable = field(default_factory=ExponentTable)
    conj_neg: ExponentTable = field(default_factory=ExponentTable)
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise PresentationError("a presentation needs at least one generator")
        if not isinstance(self.conj_pos, ExponentTable):
            object.__setattr__(self, "conj_pos", ExponentTable(self.conj_pos))
        if not isinstance(self.conj_neg, ExponentTable):
            object.__setattr__(self, "conj_neg", ExponentTable(self.conj_neg))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(1, self.n + 1)))
        else:
            object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != self.n or len(set(self.names)) != self.n:
            raise PresentationError("need exactly n distinct generator names")
        for table in (self.conj_pos, self.conj_neg):
            for i, j, k in table:
                if not (1 <= j < i < k <= self.n):
                    raise PresentationError(f"index triple {(i, j, k)} violates 1 <= j < i < k <= n")

    def tail(self, i: int, j: int, sign: int = 1) -> tuple[Letter, ...]:
        """Tail word of ``x_i^{x_j^sign}`` after the leading ``x_i``."""
        table = self.conj_pos if sign > 0 else self.conj_neg
        return tuple((k, table.get((i, j, k))) for k in range(i + 1, self.n + 1) if table.get((i, j, k)))

    def tails(self, sign: int) -> dict[tuple[int, int], tuple[Letter, ...]]:
        table = self.conj_pos if sign > 0 else self.conj_neg
        out: dict[tuple[int, int], list[Letter]] = {}
        for i, j, k in table:
            out.setdefault((i, j), []).append((k, table[(i, j, k)]))
        return {key: tuple(sorted(v)) for key, v in out.items()}

    def relations(self) -> Iterator[tuple[int, int, int, tuple[Letter, ...]]]:
        """All conjugacy relations ``(i, j, sign, tail)``, trivial ones included."""
        for j in range(1, self.n + 1):
            for i in range(j + 1, self.n + 1):
                for sign in (1, -1):
                    yield i, j, sign, self.tail(i, j, sign)

    def index(self, name: str) -> int:
        """1-based index of a generator given by name or as ``x<k>``."""
        if name in self.names:
            return self.names.index(name) + 1
        m = re.fullmatch(r"x(\d+)", name)
        if m and 1 <= int(m.group(1)) <= self.n:
            return int(m.group(1))
        raise PresentationError(f"unknown generator {name!r}")

    def parse_word(self, text: str) -> Word:
        return parse_word(text, self)

    def word_str(self, w: Word) -> str:
        return " ".join(self.names[g - 1] + ("" if e == 1 else f"^{e}") for g, e in w.letters)

    def inverse_tails_consistent(self) -> bool:
        """Check that conjugating ``x_i`` by ``x_j`` and back by ``x_j^-1`` returns ``x_i``."""
        col = Collector(self.n, {1: self.tails(1), -1: self.tails(-1)})
        for i, j, sign, tail in self.relations():
            if sign < 0:
                continue
            # (x_i^{x_j})^{x_j^-1} = prod over the tail word letters conjugated back
            word: list[Letter] = []
            for k, e in ((i, 1),) + tail:
                conj = ((k, 1),) + self.tail(k, j, -1)
                if e > 0:
                    word.extend(conj * e)
                else:
                    word.extend(tuple((g, -x) for g, x in reversed(conj)) * -e)
            expected = tuple(1 if k == i else 0 for k in range(1, self.n + 1))
            if col.collect_word(word) != expected:
                return False
        return True


# ---------------------------------------------------------------------------
# deriving the inverse-conjugate tails


def _solve_inverse_tails(n: int, pos: Mapping[Triple, int], neg_given: Mapping[Triple, int],
                         given_pairs: set[tuple[int, int]]) -> dict[Triple, int]:
    """Fill in ``x_i^{x_j^-1}`` for every pair not in ``given_pairs``.

    Works downward in ``j``: conjugation by ``x_j`` only touches generators
    above ``j``, whose tables are complete by then.  The conjugate ``v`` with
    ``v^{x_j} = x_i`` is found by fixed-point correction inside ``G_{i}``.
    """
    neg = dict(neg_given)
    pos_tails: dict[tuple[int, int], list[Letter]] = {}
    for (i, j, k), e in pos.items():
        pos_tails.setdefault((i, j), []).append((k, e))
    for key in pos_tails:
        pos_tails[key].sort()

    def neg_tails():
        out: dict[tuple[int, int], list[Letter]] = {}
        for (i, j, k), e in neg.items():
            if e:
                out.setdefault((i, j), []).append((k, e))
        return {key: sorted(v) for key, v in out.items()}

    for j in range(n - 1, 0, -1):
        col = Collector(n, {1: pos_tails, -1: neg_tails()})

        def conj_by_xj(v: Sequence[int]) -> ExponentVector:
            word: list[Letter] = []
            for k, e in enumerate(v, start=1):
                if not e:
                    continue
                conj = ((k, 1),) + tuple(pos_tails.get((k, j), ()))
                if e > 0:
                    word.extend(conj * e)
                else:
                    word.extend(tuple((g, -x) for g, x in reversed(conj)) * -e)
            return col.collect_word(word)

        for i in range(j + 1, n + 1):
            if (i, j) in given_pairs:
                continue
            target = tuple(1 if k == i else 0 for k in range(1, n + 1))
            v = target
            for _ in range(n + 1):
                image = conj_by_xj(v)
                if image == target:
                    break
                error = col.multiply(col.invert(image), target)
                v = col.multiply(v, error)
            else:
                raise PresentationError(f"could not derive x{i}^(x{j}^-1); presentation is not nilpotent")
            if any(v[:i - 1]) or v[i - 1] != 1:
                raise PresentationError(f"derived x{i}^(x{j}^-1) is not of nilpotent shape")
            for k in range(i + 1, n + 1):
                if v[k - 1]:
                    neg[(i, j, k)] = v[k - 1]
    return neg


def make_presentation(n: int, conj_pos: Mapping[Triple, int], conj_neg: Mapping[Triple, int] | None = None,
                      names: Sequence[str] | None = None) -> NilpotentPresentation:
    """Build a presentation, deriving every inverse-conjugate relation not supplied.

    ``conj_neg`` entries are taken as authoritative for each pair ``(i, j)``
    that has at least one entry there; all other pairs are derived.
    """
    conj_neg = dict(conj_neg or {})
    given_pairs = {(i, j) for (i, j, _k) in conj_neg}
    for i, j, k in list(conj_pos) + list(conj_neg):
        if not (1 <= j < i < k <= n):
            raise PresentationError(f"index triple {(i, j, k)} violates 1 <= j < i < k <= n")
    neg = _solve_inverse_tails(n, conj_pos, conj_neg, given_pairs)
    return NilpotentPresentation(n, ExponentTable(conj_pos), ExponentTable(neg), tuple(names or ()))


# ---------------------------------------------------------------------------
# text format

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_LETTER = re.compile(rf"\s*({_NAME})(?:\^(-?\d+)|\^\((-?\d+)\))?")
_LHS_CONJ = re.compile(rf"^\s*({_NAME})\s*\^\s*(?:({_NAME})|\(\s*({_NAME})\s*\^\s*(-1)\s*\))\s*$")
_LHS_POWER = re.compile(rf"^\s*({_NAME})\s*\^\s*\(?\s*-?\d+\s*\)?\s*$")


def _parse_letters(text: str, names: Mapping[str, int], line: int, col0: int) -> list[Letter]:
    letters: list[Letter] = []
    pos = 0
    body = text.replace("*", " ")
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        m = _LETTER.match(body, pos)
        if not m:
            raise PresentationError(f"unexpected character {body[pos]!r}", line, col0 + pos + 1)
        name = m.group(1)
        if name not in names:
            if name == "1" or name == "id":
                pos = m.end()
                continue
            raise PresentationError(f"unknown generator {name!r}", line, col0 + m.start(1) + 1)
        exp = m.group(2) or m.group(3) or "1"
        letters.append((names[name], int(exp)))
        pos = m.end()
    return letters


def parse_presentation(text: str) -> NilpotentPresentation:
    """Parse the line-oriented presentation format (see README)."""
    names: list[str] | None = None
    index: dict[str, int] = {}
    pos_rel: dict[Triple, int] = {}
    neg_rel: dict[Triple, int] = {}
    seen: dict[tuple[int, int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        col0 = len(line) - len(line.lstrip())
        if stripped.startswith("gens:"):
            if names is not None:
                raise PresentationError("duplicate gens declaration", lineno, col0 + 1)
            names = stripped[len("gens:"):].replace(",", " ").split()
            if not names:
                raise PresentationError("no generators declared", lineno, col0 + 1)
            for nm in names:
                if not re.fullmatch(_NAME, nm):
                    raise PresentationError(f"bad generator name {nm!r}", lineno, line.index(nm) + 1)
            if len(set(names)) != len(names):
                raise PresentationError("duplicate generator name", lineno, col0 + 1)
            index = {nm: i + 1 for i, nm in enumerate(names)}
            continue
        body, body_col = stripped, col0
        if stripped.startswith("rel:"):
            body = stripped[len("rel:"):]
            body_col = col0 + len("rel:")
        if "=" not in body:
            raise PresentationError("expected 'gens:' or a relation 'lhs = rhs'", lineno, col0 + 1)
        if names is None:
            raise PresentationError("relation before 'gens:' declaration", lineno, col0 + 1)
        lhs, rhs = body.split("=", 1)
        rhs_col = body_col + len(lhs) + 1
        if _LHS_POWER.match(lhs):
            raise PresentationError("power relations are not allowed (torsion-free groups only)",
                                    lineno, body_col + 1)
        m = _LHS_CONJ.match(lhs)
        if not m:
            raise PresentationError("left-hand side must be 'xi^xj' or 'xi^(xj^-1)'", lineno, body_col + 1)
        a, b = m.group(1), m.group(2) or m.group(3)
        sign = 1 if m.group(2) else -1
        for nm in (a, b):
            if nm not in index:
                raise PresentationError(f"unknown generator {nm!r}", lineno, body_col + lhs.index(nm) + 1)
        i, j = index[a], index[b]
        if not j < i:
            raise PresentationError(f"conjugacy relation needs j < i, got {a}^{b}", lineno, body_col + 1)
        if (i, j, sign) in seen:
            raise PresentationError(f"relation for {a}^{b} given twice", lineno, body_col + 1)
        seen[(i, j, sign)] = lineno
        letters = _parse_letters(rhs, index, lineno, rhs_col)
        if not letters or letters[0] != (i, 1):
            raise PresentationError(f"right-hand side must start with {a}", lineno, rhs_col + 1)
        prev = i
        table = pos_rel if sign > 0 else neg_rel
        for k, e in letters[1:]:
            if k <= prev:
                raise PresentationError(
                    f"tail generators must have increasing indices above {a}", lineno, rhs_col + 1)
            prev = k
            table[(i, j, k)] = e
    if names is None:
        raise PresentationError("missing 'gens:' declaration")
    given_pairs = {(i, j) for (i, j, s) in seen if s < 0}
    n = len(names)
    neg = _solve_inverse_tails(n, pos_rel, neg_rel, given_pairs)
    return NilpotentPresentation(n, ExponentTable(pos_rel), ExponentTable(neg), tuple(names))


def render(pres: NilpotentPresentation) -> str:
    """Serialize ``pres`` in the text format accepted by :func:`parse_presentation`."""
    names = pres.names
    lines = ["gens: " + " ".join(names)]
    for j in range(1, pres.n + 1):
        for i in range(j + 1, pres.n + 1):
            tp, tn = pres.tail(i, j, 1), pres.tail(i, j, -1)
            if not tp and not tn:
                continue
            for sign, tail in ((1, tp), (-1, tn)):
                lhs = f"{names[i - 1]}^{names[j - 1]}" if sign > 0 else f"{names[i - 1]}^({names[j - 1]}^-1)"
                rhs = " ".join([names[i - 1]] + [names[k - 1] + ("" if e == 1 else f"^{e}") for k, e in tail])
                lines.append(f"rel: {lhs} = {rhs}")
    return "\n".join(lines) + "\n"


def parse_word(text: str, pres: NilpotentPresentation) -> Word:
    """Parse a word such as ``"x2 x1^-3 x3"``; ``*`` separators are allowed."""
    letters: list[Letter] = []
    body = text.replace("*", " ")
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        m = _LETTER.match(body, pos)
        if not m:
            raise PresentationError(f"unexpected character {body[pos]!r} in word", 1, pos + 1)
        try:
            g = pres.index(m.group(1))
        except PresentationError as exc:
            raise PresentationError(str(exc), 1, m.start(1) + 1) from None
        letters.append((g, int(m.group(2) or m.group(3) or "1")))
        pos = m.end()
    return Word(tuple(letters))


# ---------------------------------------------------------------------------
# built-in families


def free_abelian(n: int) -> NilpotentPresentation:
    if n < 1:
        raise PresentationError("free abelian rank must be >= 1")
    return NilpotentPresentation(n)


def free_nilpotent_class2(r: int) -> NilpotentPresentation:
    """Free class-2 nilpotent group of rank ``r``: ``x_1..x_r`` then commutators ``c_ab``."""
    if r < 2:
        raise PresentationError("free_nilpotent_class2 needs rank r >= 2")
    names = [f"x{a}" for a in range(1, r + 1)]
    pos: dict[Triple, int] = {}
    neg: dict[Triple, int] = {}
    for a in range(1, r + 1):
        for b in range(a + 1, r + 1):
            names.append(f"c{a}{b}" if r < 10 else f"c{a}_{b}")
            c = len(names)
            pos[(b, a, c)] = 1
            neg[(b, a, c)] = -1
    return NilpotentPresentation(len(names), ExponentTable(pos), ExponentTable(neg), tuple(names))


def heisenberg() -> NilpotentPresentation:
    return free_nilpotent_class2(2)


def unitriangular_positions(m: int) -> list[tuple[int, int]]:
    """Positions ``(p, q)`` of the generators of UT(m, Z), by superdiagonal then row."""
    return [(p, p + d) for d in range(1, m) for p in range(1, m - d + 1)]


def elementary_matrix(m: int, p: int, q: int, e: int = 1) -> list[list[int]]:
    mat = [[int(r == c) for c in range(m)] for r in range(m)]
    mat[p - 1][q - 1] = e
    return mat


def int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    size = len(a)
    return [[sum(a[r][t] * b[t][c] for t in range(size)) for c in range(size)] for r in range(size)]


def unitriangular_exponents(mat: Sequence[Sequence[int]]) -> ExponentVector:
    """Normal-form exponents of a unitriangular integer matrix over ``e_pq`` generators.

    Peels generators off the left in normal-form order; after the earlier
    generators are removed the entry ``(p, q)`` equals the next exponent.
    """
    m = len(mat)
    cur = [list(row) for row in mat]
    out = []
    for p, q in unitriangular_positions(m):
        e = cur[p - 1][q - 1]
        out.append(e)
        if e:
            cur = int_matmul(elementary_matrix(m, p, q, -e), cur)
    return tuple(out)


def unitriangular_matrix(m: int, exps: Sequence[int]) -> list[list[int]]:
    mat = elementary_matrix(m, 1, 1, 1)
    for (p, q), e in zip(unitriangular_positions(m), exps):
        if e:
            mat = int_matmul(mat, elementary_matrix(m, p, q, e))
    return mat


def unitriangular(m: int) -> NilpotentPresentation:
    """UT(m, Z) on the elementary matrices ``e_pq``; tails computed in the matrix model."""
    if m < 3:
        raise PresentationError("unitriangular needs size m >= 3")
    gens = unitriangular_positions(m)
    n = len(gens)
    mats = [elementary_matrix(m, p, q, 1) for p, q in gens]
    invs = [elementary_matrix(m, p, q, -1) for p, q in gens]
    pos: dict[Triple, int] = {}
    neg: dict[Triple, int] = {}
    for j in range(1, n + 1):
        for i in range(j + 1, n + 1):
            for table, left, right in ((pos, invs[j - 1], mats[j - 1]), (neg, mats[j - 1], invs[j - 1])):
                conj = unitriangular_exponents(int_matmul(int_matmul(left, mats[i - 1]), right))
                if any(conj[:i - 1]) or conj[i - 1] != 1:
                    raise AssertionError(f"conjugate of e{gens[i - 1]} is not of nilpotent shape")
                for k in range(i + 1, n + 1):
                    if conj[k - 1]:
                        table[(i, j, k)] = conj[k - 1]
    names = tuple(f"e{p}{q}" if m < 10 else f"e{p}_{q}" for p, q in gens)
    return NilpotentPresentation(n, ExponentTable(pos), ExponentTable(neg), names)


FAMILIES = ("heisenberg", "free_abelian", "free_nilpotent_class2", "unitriangular")


def builtin(family: str, param: int | None = None) -> NilpotentPresentation:
    """Built-in family by name; ``family`` may carry its parameter as ``name:param``."""
    if ":" in family:
        family, raw = family.split(":", 1)
        try:
            param = int(raw)
        except ValueError:
            raise PresentationError(f"bad family parameter {raw!r}") from None
    if family == "heisenberg":
        return heisenberg()
    if param is None:
        raise PresentationError(f"family {family!r} needs a size parameter")
    if family == "free_abelian":
        return free_abelian(param)
    if family == "free_nilpotent_class2":
        return free_nilpotent_class2(param)
    if family == "unitriangular":
        return unitriangular(param)
    raise PresentationError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


# ---------------------------------------------------------------------------
# randomized associativity


@dataclass
class AssociativityReport:
    trials: int
    failures: int = 0
    counterexample: tuple[ExponentVector, ExponentVector, ExponentVector] | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.error is None


def associativity_check(pres: NilpotentPresentation, trials: int = 100, seed: int = 0,
                        box: int = 5) -> AssociativityReport:
    """Compare ``(uv)w`` with ``u(vw)`` on random exponent vectors in ``[-box, box]^n``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    from .collect import DEFAULT_MAX_STEPS, collector_for

    col = collector_for(pres, DEFAULT_MAX_STEPS)
    rng = random.Random(seed)
    report = AssociativityReport(trials)
    for _ in range(trials):
        u, v, w = (tuple(rng.randint(-box, box) for _ in range(pres.n)) for _ in range(3))
        try:
            left = col.multiply(col.multiply(u, v), w)
            right = col.multiply(u, col.multiply(v, w))
        except CollectionError as exc:
            report.error = str(exc)
            report.counterexample = report.counterexample or (u, v, w)
            break
        if left != right:
            report.failures += 1
            if report.counterexample is None:
                report.counterexample = (u, v, w)
    return report
