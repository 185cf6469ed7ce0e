"""Acceptance criteria, one check per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``;
either way one PASS/FAIL line is printed per criterion.
"""

from __future__ import annotations

import functools
import random
import subprocess
import sys
import time

import pytest

from nilmat.basis import (
    build_basis_coordinate,
    build_basis_general,
    closure_violations,
    coordinate_insert_bound,
    general_insert_bound,
    dimension_bound,
)
from nilmat.bench import run_bench
from nilmat.collect import collect
from nilmat.matrep import check_unitriangular, is_unipotent, representation, verify_faithful_sample, verify_relations
from nilmat.multpoly import action_polys, all_action_polys, qbar_term_count, structure_violations
from nilmat.polyarith import coordinates
from nilmat.presentation import Word, builtin

FAMILY_SET = [f"unitriangular:{m}" for m in (3, 4, 5, 6)] + [f"free_nilpotent_class2:{r}" for r in (2, 3, 4, 5)]
ALL_BUILTINS = ["heisenberg", "free_abelian:1", "free_abelian:2", "free_abelian:3"] + FAMILY_SET


@functools.cache
def pres(name):
    return builtin(name)


@functools.cache
def general(name):
    p = pres(name)
    return build_basis_general(p, coordinates(p.n))


@functools.cache
def coordinate(name):
    return build_basis_coordinate(pres(name), check_closure=False)


@functools.cache
def rep(name):
    return representation(pres(name), general(name))


def cli(*args):
    return subprocess.run([sys.executable, "-m", "nilmat", *args], capture_output=True, text=True, check=False)


def criterion_1():
    t0 = time.perf_counter()
    basis = cli("basis", "--builtin", "heisenberg", "--format", "json")
    verify = cli("verify", "--builtin", "heisenberg", "--trials", "1000", "--max-len", "16", "--seed", "0")
    elapsed = time.perf_counter() - t0
    dim_ok = '"dimension": 4' in basis.stdout
    ok = dim_ok and verify.returncode == 0 and elapsed < 5.0
    return ok, f"dimension 4: {dim_ok}, verify exit {verify.returncode}, {elapsed:.2f}s (< 5s)"


def criterion_2():
    bad = []
    for name in ALL_BUILTINS:
        if pres(name).n <= 15 and coordinate(name).elems != general(name).elems:
            bad.append(f"{name} ({len(coordinate(name))} vs {len(general(name))})")
    return not bad, "mismatch on " + ", ".join(bad) if bad else f"{len(ALL_BUILTINS)} builtins identical"


def criterion_3():
    rows = []
    ok = True
    for name in FAMILY_SET:
        p = pres(name)
        m = qbar_term_count(p).m
        d, bound = len(general(name)), dimension_bound(p.n, m)
        ok &= d <= bound
        rows.append(f"{name} {d}<={bound}")
    return ok, "; ".join(rows)


def criterion_4():
    fails = []
    main_loop_ok = True
    for name in FAMILY_SET:
        p = pres(name)
        m = qbar_term_count(p).m
        g, c = general(name).insert_count, coordinate(name).insert_count
        bg, bc = general_insert_bound(p.n, m), coordinate_insert_bound(p.n, m)
        if g > bg:
            fails.append(f"{name} figure1 {g}>{bg}")
        main_loop_ok &= g - p.n <= bg
        if c > bc:
            fails.append(f"{name} figure2 {c}>{bc}")
        if c > g:
            fails.append(f"{name} figure2 {c} > figure1 {g}")
    note = f"; figure1 main-loop counts (seed inserts excluded) within bound: {main_loop_ok}"
    return not fails, ("; ".join(fails) if fails else "all counts within bounds") + note


def criterion_5():
    rng = random.Random(2024)
    bad = []
    for name in FAMILY_SET:
        p = pres(name)
        for j in range(1, p.n + 1):
            ap = action_polys(p, j)
            if structure_violations(ap):
                bad.append(f"{name} j={j} structure")
            for _ in range(200):
                e = tuple(rng.randint(-8, 8) for _ in range(p.n))
                if ap.evaluate(e) != collect(p, Word.from_exponents(e) * Word(((j, -1),))):
                    bad.append(f"{name} j={j} at {e}")
                    break
    return not bad, "; ".join(bad[:5]) if bad else "200 points x every generator agree; structure holds"


def criterion_6():
    bad = []
    for name in FAMILY_SET:
        p, r = pres(name), rep(name)
        if not verify_relations(p, r).passed:
            bad.append(f"{name} relations")
        if verify_faithful_sample(p, r, trials=500, seed=11).homomorphism_failures:
            bad.append(f"{name} homomorphism")
        if not all(is_unipotent(M) for M in r.mats):
            bad.append(f"{name} unipotent")
    return not bad, "; ".join(bad) if bad else "relations, 500 homomorphism pairs, unipotence all pass"


def criterion_7():
    names = ["heisenberg", "free_abelian:1", "free_abelian:2", "free_abelian:3", "free_nilpotent_class2:2",
             "free_nilpotent_class2:3", "free_nilpotent_class2:4", "unitriangular:3", "unitriangular:4", "unitriangular:5"]
    bad = [n for n in names if not check_unitriangular(rep(n)).passed]
    return not bad, "failed: " + ", ".join(bad) if bad else f"{len(names)} groups integral unitriangular"


def criterion_8():
    slope = run_bench("unitriangular", [3, 4, 5, 6], timing=False)["loglog_slope"]
    return slope <= 2.2, f"slope {slope:.4f} <= 2.2"


def _suite_run():
    out = []
    for name in FAMILY_SET:
        out.append(cli("verify", "--builtin", name, "--trials", "100", "--seed", "5", "--format", "json").stdout)
    out.append(cli("bench", "--family", "unitriangular", "--sizes", "3..6", "--no-timing", "--format", "json").stdout)
    out.append(cli("bench", "--family", "free_nilpotent_class2", "--sizes", "2..5", "--no-timing",
                   "--format", "json").stdout)
    return out


def criterion_9():
    a, b = _suite_run(), _suite_run()
    ok = a == b and all(a)
    return ok, f"{len(a)} JSON reports byte-identical across two runs" if ok else "reports differ"


CRITERIA = {
    1: ("Heisenberg end-to-end", criterion_1),
    2: ("Figure 1 / Figure 2 basis equivalence", criterion_2),
    3: ("dimension bound", criterion_3),
    4: ("Insert-count bounds", criterion_4),
    5: ("multiplication-polynomial oracle agreement", criterion_5),
    6: ("representation correctness", criterion_6),
    7: ("integral unitriangular matrices", criterion_7),
    8: ("quadratic growth slope", criterion_8),
    9: ("determinism", criterion_9),
}


def _line(num, ok, detail):
    return f"criterion {num} [{CRITERIA[num][0]}]: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num][1]()
    with capsys.disabled():
        print("\n" + _line(num, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(num, *CRITERIA[num][1]()) for num in sorted(CRITERIA)]
    for num, ok, detail in results:
        print(_line(num, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
