import random

import pytest

from nilmat.collect import collect, multiply
from nilmat.presentation import (
    ExponentTable,
    NilpotentPresentation,
    PresentationError,
    Word,
    associativity_check,
    builtin,
    free_nilpotent_class2,
    heisenberg,
    parse_presentation,
    render,
    unitriangular,
)

from oracles import random_vec, ut_normal_matrix, ut_word_matrix

HEIS_TEXT = """\
gens: x1 x2 x3
rel: x2^x1 = x2 x3
rel: x2^(x1^-1) = x2 x3^-1
"""


def test_parse_heisenberg_file():
    p = parse_presentation(HEIS_TEXT)
    assert p.n == 3
    assert dict(p.conj_pos) == {(2, 1, 3): 1}
    assert dict(p.conj_neg) == {(2, 1, 3): -1}
    assert p.conj_pos.get((3, 1, 4), 0) == 0


def test_parse_no_relations_is_free_abelian():
    p = parse_presentation("gens: a b\n")
    assert p.n == 2 and not p.conj_pos and not p.conj_neg


def test_parse_derives_missing_inverse_tails():
    p = parse_presentation("gens: x1 x2 x3\nx2^x1 = x2 x3   # comment\n")
    assert dict(p.conj_neg) == {(2, 1, 3): -1}
    assert p == heisenberg().__class__(3, p.conj_pos, p.conj_neg)


def test_power_relation_rejected():
    with pytest.raises(PresentationError, match="power"):
        parse_presentation("gens: x1 x2\nrel: x1^5 = x2\n")


@pytest.mark.parametrize("text, line", [
    ("gens: x1 x2\nrel: x1^x2 = x1\n", 2),          # j > i
    ("gens: x1 x2\nrel: x2^x1 = x1\n", 2),          # rhs must start with x2
    ("gens: x1 x2 x3\nrel: x3^x1 = x3 x2\n", 2),    # tail below i
    ("gens: x1 x2\nrel: x2^x9 = x2\n", 2),          # unknown generator
    ("rel: x2^x1 = x2\n", 1),
    ("gens: x1 x2\nnonsense\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(PresentationError) as exc:
        parse_presentation(text)
    assert exc.value.line == line


def test_index_range_enforced():
    with pytest.raises(PresentationError):
        NilpotentPresentation(3, {(1, 2, 3): 1})


@pytest.mark.parametrize("name", ["heisenberg", "free_abelian:3", "free_nilpotent_class2:3", "unitriangular:4", "unitriangular:5"])
def test_render_round_trip(name):
    p = builtin(name)
    assert parse_presentation(render(p)) == p


def test_builtin_sizes():
    assert builtin("heisenberg") == free_nilpotent_class2(2)
    assert builtin("free_nilpotent_class2", 3).n == 6
    assert builtin("free_nilpotent_class2:5").n == 15
    assert [unitriangular(m).n for m in (3, 4, 5, 6)] == [3, 6, 10, 15]


@pytest.mark.parametrize("name", ["free_nilpotent_class2:1", "unitriangular:2", "free_abelian:0", "nope:3", "unitriangular:x", "unitriangular"])
def test_builtin_errors(name):
    with pytest.raises(PresentationError):
        builtin(name)


def test_ut3_is_heisenberg_up_to_relabel():
    # x3 -> x3^-1 maps one table onto the other
    ut, h = unitriangular(3), heisenberg()
    assert ut.n == h.n == 3
    assert {k: -v for k, v in ut.conj_pos.items()} == dict(h.conj_pos)
    assert {k: -v for k, v in ut.conj_neg.items()} == dict(h.conj_neg)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_unitriangular_collect_matches_matrix_model(m):
    p = unitriangular(m)
    rng = random.Random(m)
    for _ in range(40):
        letters = [(rng.randint(1, p.n), rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(rng.randint(0, 8))]
        e = collect(p, Word(tuple(letters)))
        assert ut_normal_matrix(m, e) == ut_word_matrix(m, letters)


@pytest.mark.parametrize("name", ["heisenberg", "free_nilpotent_class2:3", "unitriangular:4", "unitriangular:5"])
def test_builtins_consistent(name):
    p = builtin(name)
    assert p.inverse_tails_consistent()
    assert associativity_check(p, trials=100, seed=3).passed


def test_corrupted_heisenberg_fails_associativity():
    bad = NilpotentPresentation(3, ExponentTable({(2, 1, 3): 1}), ExponentTable({(2, 1, 3): 1}))
    assert not bad.inverse_tails_consistent()
    rep = associativity_check(bad, trials=100, seed=0)
    assert not rep.passed
    assert rep.counterexample is not None


def test_trivial_group_one_trial():
    assert associativity_check(builtin("free_abelian:1"), trials=1).passed


def test_word_normalization():
    w = Word(((1, 2), (1, -2), (2, 0), (3, 1), (3, 1)))
    assert w.letters == ((3, 2),)
    assert (w * w.inverse()).letters == ()
    p = heisenberg()
    assert p.parse_word("x2 x1^-1 * c12^(3)").letters == ((2, 1), (1, -1), (3, 3))
    assert p.parse_word("x3").letters == ((3, 1),)
    with pytest.raises(PresentationError):
        p.parse_word("x4")


def test_associativity_random_heisenberg():
    p = heisenberg()
    rng = random.Random(0)
    for _ in range(30):
        u, v, w = (random_vec(rng, 3) for _ in range(3))
        assert multiply(p, multiply(p, u, v), w) == multiply(p, u, multiply(p, v, w))
