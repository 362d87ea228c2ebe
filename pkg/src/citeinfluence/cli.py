"""Command-line entry point: compute, compare, axioms, generate, reduce, validate.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 size guard.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from . import __version__
from .author_influence import MODES, FULL_AI_LIMIT, WeightScheme, alpha_from_activity, concave_index, influence_index
from .axioms import AXIOMS, DEFAULT_GENERATOR, find_violation
from .counting import canonical_reduction, registry
from .formats import Report, database_document, emit_database, parse_database, write_output
from .generators import FIXTURE_NAMES, fixture, generate_random_db
from .model import Database, DatabaseError, DomainError, erase_self_only_authors, field_components, validate_domain
from .paper_influence import InfluenceParams

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


class GuardError(Exception):
    pass


def _range(text: str) -> tuple[int, int]:
    """``"5"`` or ``"3-7"`` as an inclusive range."""
    try:
        lo, _, hi = text.partition("-")
        lo_i = int(lo)
        hi_i = int(hi) if hi else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO-HI, got {text!r}") from None
    if lo_i > hi_i or lo_i < 0:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo_i, hi_i


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _params(args) -> InfluenceParams:
    try:
        return InfluenceParams(args.delta, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _guard(d: Database, args) -> None:
    if d.n_papers > args.max_papers:
        raise GuardError(f"{d.n_papers} papers exceed --max-papers {args.max_papers}")
    if d.n_authors > FULL_AI_LIMIT:
        raise GuardError(f"{d.n_authors} authors exceed the dense author-matrix limit {FULL_AI_LIMIT}")


def _base_metadata(args, **extra) -> dict:
    meta = {"command": args.command, "version": __version__}
    for key in ("delta", "tol", "mode", "seed"):
        if hasattr(args, key):
            meta["tolerance" if key == "tol" else key] = getattr(args, key)
    meta.update(extra)
    return meta


# -- commands -----------------------------------------------------------------


def cmd_compute(args) -> int:
    d, weights, activity = parse_database(args.input)
    params = _params(args)
    if args.alpha_from_activity:
        weights = WeightScheme(weights.shares, alpha_from_activity(activity, d.authors))
    res = influence_index(d, params, weights, mode=args.mode)
    kept = erase_self_only_authors(d)[0] if args.mode == "noself" else d
    comp = field_components(kept).component_of()
    columns = ["author", "component", "influence", "normalizer"]
    concave = None
    if args.concave is not None:
        _guard(kept, args)
        concave = concave_index(kept, params, args.concave)
        columns.append("concave")
    rows = []
    for a in sorted(res.per_author):
        row = [a, comp[a], res.per_author[a], res.normalizers[a]]
        if concave is not None:
            row.append(concave[a])
        rows.append(row)
    meta = _base_metadata(
        args,
        order=params.order,
        alpha_from_activity=args.alpha_from_activity,
        concave_exponent=args.concave,
        authors=len(rows),
        total=res.total,
        reported_tolerance=res.reported_tolerance,
        erased=list(res.erased),
    )
    write_output(Report(columns, rows, meta).render(args.format), args.output)
    return EXIT_OK


def _ranks(scores: dict[str, float], authors: list[str]) -> np.ndarray:
    # rank 1 is the best score; ties share their average rank
    return rankdata([-scores[a] for a in authors], method="average")


def cmd_compare(args) -> int:
    d, _, _ = parse_database(args.input)
    reg = registry(_params(args))
    names = _names(args.indices)
    unknown = [n for n in names if n not in reg]
    if unknown or not names:
        raise UsageError(f"unknown index {', '.join(unknown) or '(none)'}; registered: {', '.join(reg)}")
    authors = d.authors
    scores = {n: reg[n].scores(d) for n in names}
    ranks = {n: _ranks(scores[n], authors) for n in names}
    comps = field_components(d)
    comp = comps.component_of()
    columns = ["author", "component"] + names + [f"rank_{n}" for n in names]
    rows = []
    for i, a in enumerate(authors):
        rows.append([a, comp[a]] + [scores[n][a] for n in names] + [float(ranks[n][i]) for n in names])
    footrule = {
        f"{x}~{y}": float(np.abs(ranks[x] - ranks[y]).sum()) for x, y in itertools.combinations(names, 2)
    }
    subtotals = {
        n: [float(sum(scores[n][a] for a in c)) for c in comps.components] for n in names
    }
    meta = _base_metadata(
        args,
        indices=names,
        footrule=footrule,
        component_sizes=[len(c) for c in comps.components],
        component_totals=subtotals,
    )
    write_output(Report(columns, rows, meta).render(args.format), args.output)
    return EXIT_OK


def cmd_axioms(args) -> int:
    reg = registry(_params(args))
    if args.index not in reg:
        raise UsageError(f"unknown index {args.index!r}; registered: {', '.join(reg)}")
    axioms = _names(args.axioms) if args.axioms else list(AXIOMS)
    bad = [x for x in axioms if x not in AXIOMS]
    if bad:
        raise UsageError(f"unknown axiom {', '.join(bad)}; known: {', '.join(AXIOMS)}")
    index = reg[args.index]
    database = parse_database(args.input).database if args.input else None
    generator = dict(DEFAULT_GENERATOR)
    if args.authors:
        generator["n_authors"] = args.authors
    if args.papers_per_author:
        generator["papers_per_author"] = args.papers_per_author
    if args.refs_per_paper:
        generator["refs_per_paper"] = args.refs_per_paper
    if args.fields:
        generator["n_fields"] = args.fields

    columns = ["axiom", "index", "outcome", "trials", "seed", "trial", "author", "before", "after", "detail", "witness"]
    rows = []
    for ax in axioms:
        budget = 1 if database is not None and ax in ("field-comparability", "null-author") else args.trials
        v = find_violation(index, ax, generator, seed=args.seed, budget=budget, database=database)
        w = v.witness
        witness = None
        if w is not None:
            witness = {
                "database": database_document(w.database),
                "transformed": database_document(w.transformed) if w.transformed is not None else None,
                "transform": w.transform,
            }
        detail = {k: val for k, val in v.detail.items() if k != "scores"}
        rows.append([
            ax, index.name, v.outcome, v.trials, v.seed, v.trial,
            w.author if w else None, w.before if w else None, w.after if w else None,
            detail, witness,
        ])  # fmt: skip
    meta = _base_metadata(
        args,
        index=index.name,
        trials=args.trials,
        input=args.input,
        generator=None if database is not None else {k: list(v) if isinstance(v, tuple) else v for k, v in generator.items()},
    )
    write_output(Report(columns, rows, meta).render(args.format), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.fixture:
        d = fixture(args.fixture)
    else:
        if args.authors is None:
            raise UsageError("generate needs --authors or --fixture")
        lo, hi = args.authors
        if lo != hi:
            raise UsageError("generate takes a single author count")
        d = generate_random_db(lo, args.papers_per_author, args.refs_per_paper, args.fields, args.seed)
    write_output(emit_database(d), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    d, _, _ = parse_database(args.input)
    write_output(emit_database(canonical_reduction(d, args.author)), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    d, _, _ = parse_database(args.input)
    report = validate_domain(d)
    write_output(report.describe() + "\n", args.output)
    return EXIT_OK if report.valid else EXIT_INVALID


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="citeinfluence", description="Influence indices for citation databases.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, influence=True, report=True):
        if influence:
            p.add_argument("--delta", type=float, default=0.5, help="discount factor in [0, 1)")
            p.add_argument("--tol", type=float, default=1e-10, help="series truncation tolerance")
        p.add_argument("--output", "-o", default=None, help="output path ('-' for stdout)")
        if report:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--max-papers", type=int, default=10**6, help="size guard for dense computations")

    p = sub.add_parser("compute", help="influence index of every author")
    p.add_argument("input")
    p.add_argument("--mode", choices=MODES, default="base")
    p.add_argument("--alpha-from-activity", action="store_true", help="weight author debts by their activity")
    p.add_argument("--concave", type=float, default=None, metavar="EXPONENT", help="add a concave-index column")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("compare", help="several indices side by side")
    p.add_argument("input")
    p.add_argument("--indices", default="h,euclid,influence")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("axioms", help="check axioms on an input file or generated databases")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--index", required=True)
    p.add_argument("--axioms", default=None, help=f"comma-separated subset of {','.join(AXIOMS)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--authors", type=_range, default=None)
    p.add_argument("--papers-per-author", type=_range, default=None)
    p.add_argument("--refs-per-paper", type=_range, default=None)
    p.add_argument("--fields", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("generate", help="write a seeded random database or a named fixture")
    p.add_argument("--authors", type=_range, default=None)
    p.add_argument("--papers-per-author", type=_range, default=(1, 3))
    p.add_argument("--refs-per-paper", type=_range, default=(0, 3))
    p.add_argument("--fields", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixture", choices=FIXTURE_NAMES, default=None)
    common(p, influence=False, report=False)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="two-author reduction preserving one author's citation counts")
    p.add_argument("input")
    p.add_argument("--author", required=True)
    common(p, influence=False, report=False)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("validate", help="check the domain conditions")
    p.add_argument("input")
    common(p, influence=False, report=False)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except DomainError as exc:
        print(f"error: database is outside the domain\n{exc.report.describe()}", file=sys.stderr)
        return EXIT_INVALID
    except (DatabaseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
