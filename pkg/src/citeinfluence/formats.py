"""Database documents and tabular reports.

Database documents are JSON with a fixed layout::

    {
      "authors": [{"id": "a", "papers": ["p"], "activity": 3}, ...],
      "citations": [{"citing": "q", "cited": "p"}, ...],
      "shares": {"p": {"a": 0.5, "b": 0.5}}
    }

``activity`` and ``shares`` are optional.  :func:`emit_database` writes the
canonical form (sorted ids, fixed key order, numbers with 17 significant
digits), so emit, parse and emit again gives identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, NamedTuple

from .author_influence import SHARE_TOL, WeightScheme
from .model import Database, DatabaseError


class ParseError(DatabaseError):
    """Malformed database document; the message names the offending field."""


class LoadedDatabase(NamedTuple):
    database: Database
    weights: WeightScheme
    activity: dict[str, float]


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _read_text(source: str | Path) -> str:
    if str(source) == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def _require(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise ParseError(f"{where}: {msg}")


def _number(v: Any, where: str) -> float:
    _require(isinstance(v, (int, float)) and not isinstance(v, bool), where, "expected a number")
    _require(math.isfinite(v), where, "number must be finite")
    return float(v)


def parse_database_text(text: str) -> LoadedDatabase:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _require(isinstance(doc, dict), "document", "top level must be an object")
    unknown = set(doc) - {"authors", "citations", "shares"}
    _require(not unknown, "document", f"unknown keys {sorted(unknown)}")
    _require(isinstance(doc.get("authors"), list), "authors", "expected a list")

    portfolio: dict[str, list[str]] = {}
    activity: dict[str, float] = {}
    owner: dict[str, str] = {}
    for i, entry in enumerate(doc["authors"]):
        where = f"authors[{i}]"
        _require(isinstance(entry, dict), where, "expected an object")
        _require(set(entry) <= {"id", "papers", "activity"}, where, f"unknown keys {sorted(set(entry) - {'id', 'papers', 'activity'})}")
        aid = entry.get("id")
        _require(isinstance(aid, str) and aid != "", f"{where}.id", "expected a non-empty string")
        _require(aid not in portfolio, f"{where}.id", f"duplicate author {aid!r}")
        papers = entry.get("papers")
        _require(isinstance(papers, list), f"{where}.papers", "expected a list")
        for j, p in enumerate(papers):
            _require(isinstance(p, str) and p != "", f"{where}.papers[{j}]", "expected a non-empty string")
            _require(p not in owner, f"{where}.papers[{j}]", f"paper {p!r} already belongs to {owner.get(p)!r}")
            owner[p] = aid
        portfolio[aid] = papers
        if "activity" in entry:
            activity[aid] = _number(entry["activity"], f"{where}.activity")

    citations = doc.get("citations", [])
    _require(isinstance(citations, list), "citations", "expected a list")
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for i, c in enumerate(citations):
        where = f"citations[{i}]"
        _require(isinstance(c, dict) and set(c) == {"citing", "cited"}, where, 'expected {"citing": ..., "cited": ...}')
        citing, cited = c["citing"], c["cited"]
        for key, p in (("citing", citing), ("cited", cited)):
            _require(isinstance(p, str), f"{where}.{key}", "expected a string")
            _require(p in owner, f"{where}.{key}", f"unknown paper {p!r}")
        _require(citing != cited, where, f"paper {citing!r} cites itself")
        _require((cited, citing) not in seen, where, f"duplicate citation: {citing!r} cites {cited!r} twice")
        seen.add((cited, citing))
        edges.append((cited, citing))

    shares: dict[str, dict[str, float]] = {}
    raw_shares = doc.get("shares", {})
    _require(isinstance(raw_shares, dict), "shares", "expected an object")
    for p, dist in raw_shares.items():
        where = f"shares[{p!r}]"
        _require(p in owner, where, f"unknown paper {p!r}")
        _require(isinstance(dist, dict) and dist, where, "expected a non-empty object")
        vals = {}
        for a, w in dist.items():
            _require(a in portfolio, f"{where}[{a!r}]", f"unknown author {a!r}")
            vals[a] = _number(w, f"{where}[{a!r}]")
            _require(vals[a] >= 0, f"{where}[{a!r}]", "shares must be non-negative")
        total = math.fsum(vals.values())
        _require(abs(total - 1.0) <= SHARE_TOL, where, f"shares sum {total:g} ≠ 1")
        shares[p] = vals

    d = Database(portfolio, frozenset(edges))
    return LoadedDatabase(d, WeightScheme(shares=shares), activity)


def parse_database(source: str | Path) -> LoadedDatabase:
    """Read a database document from a path, or standard input for ``"-"``."""
    return parse_database_text(_read_text(source))


def emit_database(
    d: Database,
    shares: Mapping[str, Mapping[str, float]] | None = None,
    activity: Mapping[str, float] | None = None,
) -> str:
    lines = ["{", '  "authors": [']
    rows = []
    for a in d.authors:
        row = f'    {{"id": {json.dumps(a)}, "papers": {json.dumps(sorted(d.portfolio[a]))}'
        if activity and a in activity:
            row += f', "activity": {_num(activity[a])}'
        rows.append(row + "}")
    lines.append(",\n".join(rows))
    lines.append("  ],")
    lines.append('  "citations": [')
    cites = sorted((q, p) for p, q in d.edges)
    lines.append(
        ",\n".join(f'    {{"citing": {json.dumps(q)}, "cited": {json.dumps(p)}}}' for q, p in cites)
    )
    if shares:
        lines.append("  ],")
        lines.append('  "shares": {')
        entries = []
        for p in sorted(shares):
            inner = ", ".join(f"{json.dumps(a)}: {_num(w)}" for a, w in sorted(shares[p].items()))
            entries.append(f"    {json.dumps(p)}: {{{inner}}}")
        lines.append(",\n".join(entries))
        lines.append("  }")
    else:
        lines.append("  ]")
    lines.append("}")
    return "\n".join(x for x in lines if x != "") + "\n"


def database_document(d: Database) -> dict:
    """Canonical document as a JSON-ready object (used to embed witnesses)."""
    return json.loads(emit_database(d))


# -- reports ---------------------------------------------------------------


def format_value(x: Any) -> str:
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, "#.12g")
    return str(x)


@dataclass
class Report:
    columns: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any]

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            buf = io.StringIO()
            for k, v in self.metadata.items():
                buf.write(f"# {k}: {json.dumps(v, sort_keys=True, default=str)}\n")
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow([format_value(x) if not isinstance(x, (dict, list)) else json.dumps(x, sort_keys=True) for x in r])
            return buf.getvalue()
        if fmt == "json":
            def cell(x):
                if isinstance(x, float):
                    return float(format(x, ".12g"))
                return x

            doc = {
                "metadata": self.metadata,
                "columns": self.columns,
                "rows": [{c: cell(x) for c, x in zip(self.columns, r)} for r in self.rows],
            }
            return json.dumps(doc, indent=2, default=str) + "\n"
        raise ValueError(f"unknown report format {fmt!r}")


def read_csv_report(text: str) -> tuple[dict[str, Any], list[dict[str, str]]]:
    """Split a CSV report into its metadata block and its rows."""
    meta: dict[str, Any] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition(": ")
            meta[k] = json.loads(v)
        else:
            body.append(line)
    return meta, list(csv.DictReader(body))


def write_output(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")

