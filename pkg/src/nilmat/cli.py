"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import report
from .basis import ModuleClosureError, build_basis
from .bench import COLUMNS, parse_sizes, run_bench
from .collect import CollectionError, collect
from .matrep import (
    NotInSpanError,
    check_unitriangular,
    is_unipotent,
    representation,
    verify_faithful_sample,
    verify_relations,
)
from .multpoly import DegreeCapExceeded, InterpolationError, action_polys
from .polyarith import render
from .presentation import NilpotentPresentation, PresentationError, builtin, parse_presentation

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

INTERNAL_ERRORS = (ModuleClosureError, CollectionError, DegreeCapExceeded, InterpolationError, NotInSpanError)


def _load(args) -> NilpotentPresentation:
    if args.builtin:
        return builtin(args.builtin)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise PresentationError(f"cannot read {args.file}: {exc}") from None
    return parse_presentation(text)


def _emit(args, payload, text: str) -> None:
    print(report.dumps(payload) if args.format == "json" else text)


def cmd_collect(args) -> int:
    pres = _load(args)
    e = collect(pres, pres.parse_word(args.word))
    _emit(args, {"exponents": list(e)}, "(" + ", ".join(map(str, e)) + ")")
    return EXIT_OK


def cmd_polys(args) -> int:
    pres = _load(args)
    aps = [action_polys(pres, j) for j in range(1, pres.n + 1)]
    lines = []
    for ap in aps:
        lines.append(f"# right multiplication by {pres.names[ap.j - 1]}^-1")
        for name, q in zip(pres.names, ap.polys):
            lines.append(f"  {name} -> {render(q, pres.names)}")
    _emit(args, {"generators": list(pres.names), "action_polys": [report.action_polys_json(ap, pres.names) for ap in aps]},
          "\n".join(lines))
    return EXIT_OK


def cmd_basis(args) -> int:
    pres = _load(args)
    B = build_basis(pres, args.algorithm)
    payload = report.basis_json(B, pres.names, args.counts)
    payload["algorithm"] = args.algorithm
    lines = [f"dimension {len(B)}"]
    if args.counts:
        lines.append(f"insert_count {B.insert_count}")
        lines.append(f"reduction_steps {B.reduction_steps}")
    lines += [f"  {render(b, pres.names)}" for b in B.elems]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _format_matrix(M) -> str:
    cells = [[report.frac_str(x) for x in row] for row in M]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("  [" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)


def cmd_rep(args) -> int:
    pres = _load(args)
    rep = representation(pres, build_basis(pres, args.algorithm))
    lines = [f"dimension {rep.dim}", "basis: " + ", ".join(render(b, pres.names) for b in rep.basis)]
    for name, M in zip(rep.names, rep.mats):
        lines.append(f"{name}:")
        lines.append(_format_matrix(M))
    _emit(args, report.rep_json(rep), "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    pres = _load(args)
    B = build_basis(pres, args.algorithm)
    rep = representation(pres, B)
    rel = verify_relations(pres, rep)
    faith = verify_faithful_sample(pres, rep, args.trials, args.max_len, args.seed)
    tri = check_unitriangular(rep)
    unipotent = all(is_unipotent(M) for M in rep.mats)
    ok = rel.passed and faith.passed and tri.passed and unipotent
    payload = {
        "dimension": rep.dim,
        "algorithm": args.algorithm,
        "seed": args.seed,
        "relations": report.relation_report_json(rel),
        "faithfulness": report.faithfulness_json(faith),
        "unitriangular": report.unitriangular_json(tri),
        "unipotent": unipotent,
        "passed": ok,
    }
    text = "\n".join([
        f"dimension {rep.dim}",
        f"relations: {'pass' if rel.passed else 'FAIL'} ({rel.checked} checked, {len(rel.failures)} failed)",
        f"faithfulness: {'pass' if faith.passed else 'FAIL'} ({faith.trials} trials, "
        f"{faith.identity_words} identity words)",
        f"unitriangular integral: {'pass' if tri.passed else 'FAIL'}",
        f"unipotent generators: {'pass' if unipotent else 'FAIL'}",
    ])
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    sizes = parse_sizes(args.sizes)
    result = run_bench(args.family, sizes, args.jobs, timing=not args.no_timing)
    if args.format == "json":
        print(report.dumps(result))
    elif args.format == "csv":
        buf = io.StringIO()
        cols = list(COLUMNS) + [k for k in result["rows"][0] if k.startswith("seconds")] if result["rows"] else list(COLUMNS)
        writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(result["rows"])
        print(buf.getvalue(), end="")
    else:
        header = ["n", "m", "dim", "dim_bound", "fig1", "fig1_main", "fig1_bound", "fig2", "fig2_bound", "fig2_closed"]
        lines = ["  ".join(h.rjust(10) for h in header)]
        for r in result["rows"]:
            vals = [r["n"], r["m"], r["dimension"], r["dimension_bound"], r["figure1_inserts"],
                    r["figure1_main_loop_inserts"], r["figure1_insert_bound"], r["figure2_inserts"], r["figure2_insert_bound"], r["figure2_closed"]]
            lines.append("  ".join(str(v).rjust(10) for v in vals))
        if "loglog_slope" in result:
            lines.append(f"log-log slope of dimension vs n: {result['loglog_slope']:.4f}")
        print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilmat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p: argparse.ArgumentParser) -> None:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--builtin", metavar="FAMILY[:N]",
                       help="heisenberg, free_abelian:N, free_nilpotent_class2:R, unitriangular:M")
        g.add_argument("--file", metavar="PATH", help="presentation file")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("collect", help="normal form of a word")
    source(p)
    p.add_argument("word", help='word such as "x2 x1^-1"; empty string for the identity')
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("polys", help="right-multiplication polynomials for every generator")
    source(p)
    p.set_defaults(func=cmd_polys)

    p = sub.add_parser("basis", help="module basis from the coordinate functions")
    source(p)
    p.add_argument("--algorithm", choices=("figure1", "figure2"), default="figure2")
    p.add_argument("--counts", action="store_true", help="report insert_count and reduction_steps")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("rep", help="matrix representation")
    source(p)
    p.add_argument("--algorithm", choices=("figure1", "figure2"), default="figure1")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("verify", help="relations, sampled faithfulness and unitriangularity")
    source(p)
    p.add_argument("--algorithm", choices=("figure1", "figure2"), default="figure1")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-len", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="dimension and Insert counts against their bounds")
    p.add_argument("--family", required=True, choices=("free_abelian", "free_nilpotent_class2", "unitriangular"))
    p.add_argument("--sizes", required=True, help='size range such as "3..6" or "2,3,5"')
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock columns")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PresentationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except INTERNAL_ERRORS as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
