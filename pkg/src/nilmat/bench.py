"""Scaling table: basis dimension and Insert counts against the closed-form bounds."""

from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from .basis import (
    build_basis_coordinate,
    build_basis_general,
    closure_violations,
    coordinate_insert_bound,
    general_insert_bound,
    dimension_bound,
)
from .multpoly import all_action_polys, qbar_term_count
from .polyarith import coordinates
from .presentation import PresentationError, builtin

SIZED_FAMILIES = ("free_abelian", "free_nilpotent_class2", "unitriangular")


def parse_sizes(text: str) -> list[int]:
    """``"3..6"``, ``"2,4,5"`` or ``"4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise PresentationError(f"bad size range {text!r}") from None


def _num(x) -> int | float:
    return int(x) if x == int(x) else float(x)


def bench_row(family: str, size: int, timing: bool = True) -> dict[str, Any]:
    t0 = time.perf_counter()
    pres = builtin(family, size)
    n = pres.n
    counts = qbar_term_count(pres)
    m = counts.m
    aps = all_action_polys(pres)
    t1 = time.perf_counter()
    fig1 = build_basis_general(pres, coordinates(n))
    t2 = time.perf_counter()
    fig2 = build_basis_coordinate(pres, check_closure=False)
    t3 = time.perf_counter()
    fig2_closed = not closure_violations(fig2, aps)
    dim_bound = dimension_bound(n, m)
    b1 = general_insert_bound(n, m)
    b2 = coordinate_insert_bound(n, m)
    row: dict[str, Any] = {
        "family": family,
        "param": size,
        "n": n,
        "m": m,
        "dimension": len(fig1),
        "dimension_bound": _num(dim_bound),
        "dimension_within_bound": len(fig1) <= dim_bound,
        "figure1_inserts": fig1.insert_count,
        "figure1_insert_bound": _num(b1),
        "figure1_within_bound": fig1.insert_count <= b1,
        # the bound's own accounting covers the main loop only, not the n seed inserts
        "figure1_main_loop_inserts": fig1.insert_count - n,
        "figure1_main_loop_within_bound": fig1.insert_count - n <= b1,
        "figure2_inserts": fig2.insert_count,
        "figure2_insert_bound": _num(b2),
        "figure2_within_bound": fig2.insert_count <= b2,
        "figure2_dimension": len(fig2),
        "figure2_closed": fig2_closed,
        "same_basis": fig1.elems == fig2.elems,
    }
    if timing:
        row["seconds_polys"] = round(t1 - t0, 4)
        row["seconds_figure1"] = round(t2 - t1, 4)
        row["seconds_figure2"] = round(t3 - t2, 4)
    return row


def loglog_slope(rows: Sequence[dict[str, Any]]) -> float | None:
    """Least-squares slope of log(dimension) against log(n); needs three distinct n."""
    pts = {(r["n"], r["dimension"]) for r in rows}
    if len({n for n, _ in pts}) < 3:
        return None
    xs = [math.log(n) for n, _ in sorted(pts)]
    ys = [math.log(d) for _, d in sorted(pts)]
    return statistics.linear_regression(xs, ys).slope


def run_bench(family: str, sizes: Sequence[int], jobs: int = 1, timing: bool = True) -> dict[str, Any]:
    if family not in SIZED_FAMILIES:
        raise PresentationError(f"bench needs a sized family: {', '.join(SIZED_FAMILIES)}")
    for s in sizes:
        builtin(family, s)  # validates the parameter before any work starts
    if jobs > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(bench_row, [family] * len(sizes), sizes, [timing] * len(sizes)))
    else:
        rows = [bench_row(family, s, timing) for s in sizes]
    out: dict[str, Any] = {"family": family, "rows": rows}
    slope = loglog_slope(rows)
    if slope is not None:
        out["loglog_slope"] = round(slope, 6)
    return out


COLUMNS = (
    "family", "param", "n", "m", "dimension", "dimension_bound", "figure1_inserts", "figure1_insert_bound",
    "figure1_main_loop_inserts", "figure2_inserts", "figure2_insert_bound", "figure2_closed", "same_basis",
)
