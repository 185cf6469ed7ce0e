"""Collection from the left for nilpotent presentations.

Conjugation follows ``a^b = b^-1 a b``, so a relation ``x_i^{x_j} = x_i t``
lets the collector rewrite ``x_i x_j`` as ``x_j x_i t``.  The collected prefix
is kept as an exponent vector; each uncollected letter ``x_g^{+-1}`` is moved
left past the collected suffix ``x_{g+1}^{r_{g+1}} ... x_n^{r_n}``, which gets
conjugated and pushed back onto the letter stack.
"""

from __future__ import annotations

from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

if TYPE_CHECKING:
    from .presentation import NilpotentPresentation, Word

ExponentVector = tuple[int, ...]
Letter = tuple[int, int]

DEFAULT_MAX_STEPS = 10**7


class CollectionError(RuntimeError):
    """Collection did not terminate within the step budget."""


class Collector:
    """Collection engine over conjugation tails.

    ``tails[s][(i, j)]`` is the tail ``((k, e), ...)`` with ``k > i`` such that
    ``x_i^{x_j^s} = x_i * prod x_k^e``; indices are 1-based, ``s`` is ``1`` or
    ``-1``.  Missing entries mean the generators commute.
    """

    def __init__(
        self,
        n: int,
        tails: Mapping[int, Mapping[tuple[int, int], Sequence[Letter]]],
        max_steps: int = DEFAULT_MAX_STEPS,
    ):
        self.n = n
        self.max_steps = max_steps
        # _conj[s][j][i]: 0-based word for x_i^{x_j^s}; _inv likewise for its inverse
        self._conj: dict[int, list[list[tuple[Letter, ...]]]] = {}
        self._inv: dict[int, list[list[tuple[Letter, ...]]]] = {}
        for s in (1, -1):
            conj = [[((i, 1),) for i in range(n)] for _ in range(n)]
            inv = [[((i, -1),) for i in range(n)] for _ in range(n)]
            for (i, j), tail in tails.get(s, {}).items():
                word = ((i - 1, 1),) + tuple((k - 1, e) for k, e in tail if e)
                conj[j - 1][i - 1] = word
                inv[j - 1][i - 1] = tuple((k, -e) for k, e in reversed(word))
            self._conj[s] = conj
            self._inv[s] = inv

    def collect_onto(self, r: list[int], letters: Iterable[Letter]) -> list[int]:
        """Multiply the normal form ``r`` (0-based, mutated) by ``letters`` (0-based)."""
        n = self.n
        stack = list(letters)
        stack.reverse()
        steps = 0
        limit = self.max_steps
        while stack:
            g, e = stack.pop()
            steps += 1
            if steps > limit:
                raise CollectionError(
                    f"collection did not terminate after {limit} steps "
                    "(inconsistent or non-nilpotent presentation?)"
                )
            hi = [k for k in range(g + 1, n) if r[k]]
            if not hi:
                r[g] += e
                continue
            s = 1 if e > 0 else -1
            if e != s:
                stack.append((g, e - s))
            conj = self._conj[s][g]
            inv = self._inv[s][g]
            pending: list[Letter] = []
            for k in hi:
                c = r[k]
                r[k] = 0
                word = conj[k]
                if len(word) == 1:
                    pending.append((k, c))
                elif c > 0:
                    pending.extend(word * c)
                else:
                    pending.extend(inv[k] * -c)
            r[g] += s
            pending.reverse()
            stack.extend(pending)
        return r

    # convenience wrappers in 1-based letter convention

    def collect_word(self, letters: Iterable[Letter]) -> ExponentVector:
        return tuple(self.collect_onto([0] * self.n, ((g - 1, e) for g, e in letters)))

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> ExponentVector:
        return tuple(self.collect_onto(list(u), ((k, e) for k, e in enumerate(v) if e)))

    def invert(self, u: Sequence[int]) -> ExponentVector:
        letters = [(k, -e) for k, e in enumerate(u) if e]
        letters.reverse()
        return tuple(self.collect_onto([0] * self.n, letters))

    def power(self, u: Sequence[int], k: int) -> ExponentVector:
        if k < 0:
            u, k = self.invert(u), -k
        result: ExponentVector = (0,) * self.n
        base = tuple(u)
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result


@lru_cache(maxsize=64)
def collector_for(pres: "NilpotentPresentation", max_steps: int = DEFAULT_MAX_STEPS) -> Collector:
    return Collector(pres.n, {1: pres.tails(1), -1: pres.tails(-1)}, max_steps)


def _check_length(pres: "NilpotentPresentation", *vectors: Sequence[int]) -> None:
    for v in vectors:
        if len(v) != pres.n:
            raise ValueError(f"exponent vector of length {len(v)}, expected {pres.n}")


def collect(pres: "NilpotentPresentation", w: "Word | Iterable[Letter]", max_steps: int = DEFAULT_MAX_STEPS) -> ExponentVector:
    """Normal form exponents of the word ``w``."""
    letters = getattr(w, "letters", w)
    letters = list(letters)
    for g, _ in letters:
        if not 1 <= g <= pres.n:
            raise ValueError(f"generator index {g} out of range 1..{pres.n}")
    return collector_for(pres, max_steps).collect_word(letters)


def multiply(pres: "NilpotentPresentation", u: Sequence[int], v: Sequence[int]) -> ExponentVector:
    _check_length(pres, u, v)
    return collector_for(pres).multiply(u, v)


def invert(pres: "NilpotentPresentation", u: Sequence[int]) -> ExponentVector:
    _check_length(pres, u)
    return collector_for(pres).invert(u)


def power(pres: "NilpotentPresentation", u: Sequence[int], k: int) -> ExponentVector:
    _check_length(pres, u)
    return collector_for(pres).power(u, k)


def identity(pres: "NilpotentPresentation") -> ExponentVector:
    return (0,) * pres.n


def unit(pres: "NilpotentPresentation", j: int, e: int = 1) -> ExponentVector:
    """Exponent vector of ``x_j^e``."""
    v = [0] * pres.n
    v[j - 1] = e
    return tuple(v)
