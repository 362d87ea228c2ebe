"""Bibliographic databases and the transformations used to state axioms.

A database holds authors, the partition of papers into portfolios and the
citation relation.  Edges are stored as ``(cited, citing)`` pairs, so an edge
``(p, q)`` means that paper ``q`` cites paper ``p``.

All databases are immutable: every transformation returns a new object.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

Edge = tuple[str, str]

DOMAIN_RULES = ("overlapping-portfolios", "self-citation", "no-external-reference")


class DatabaseError(ValueError):
    """Structural problem with a database or a transformation argument."""


class DomainError(DatabaseError):
    """A database that must lie in the domain does not."""

    def __init__(self, report: "DomainReport"):
        self.report = report
        super().__init__(report.describe())


@dataclass(frozen=True)
class _Indexed:
    papers: list[str]
    paper_pos: dict[str, int]
    authors: list[str]
    author_pos: dict[str, int]
    owner: np.ndarray  # author position of each paper
    cited: np.ndarray
    citing: np.ndarray


class Database:
    """Authors, their paper portfolios and the citation relation.

    ``portfolio`` maps each author id to the set of paper ids written by that author.
    ``edges`` is a set of ``(cited, citing)`` pairs.  Structural invariants
    (disjoint portfolios, known endpoints, no loops) are checked on
    construction; domain membership is checked by :func:`validate_domain`.
    """

    def __init__(self, portfolio: Mapping[str, Iterable[str]], edges: Iterable[Edge] = ()):
        port = {str(a): frozenset(ps) for a, ps in portfolio.items()}
        owner: dict[str, str] = {}
        for a in sorted(port):
            for p in port[a]:
                if p in owner:
                    raise DatabaseError(f"paper {p!r} belongs to both {owner[p]!r} and {a!r}")
                owner[p] = a
        edge_set = frozenset(edges) if not isinstance(edges, frozenset) else edges
        for cited, citing in edge_set:
            if cited not in owner:
                raise DatabaseError(f"unknown paper {cited!r} in edge {(cited, citing)!r}")
            if citing not in owner:
                raise DatabaseError(f"unknown paper {citing!r} in edge {(cited, citing)!r}")
            if cited == citing:
                raise DatabaseError(f"paper {cited!r} cites itself")
        self._portfolio = port
        self._edges = edge_set
        self._owner = owner

    @classmethod
    def from_lists(cls, portfolio: Mapping[str, Iterable[str]], edges: Iterable[Edge]) -> "Database":
        """Build from possibly repeated input, rejecting duplicate edges."""
        seen: set[Edge] = set()
        for e in edges:
            e = (str(e[0]), str(e[1]))
            if e in seen:
                raise DatabaseError(f"duplicate citation: {e[1]!r} cites {e[0]!r} more than once")
            seen.add(e)
        return cls(portfolio, frozenset(seen))

    # -- basic accessors -------------------------------------------------

    @property
    def portfolio(self) -> Mapping[str, frozenset[str]]:
        return self._portfolio

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    @cached_property
    def authors(self) -> list[str]:
        return sorted(self._portfolio)

    @cached_property
    def papers(self) -> list[str]:
        return sorted(self._owner)

    def owner(self, paper: str) -> str:
        return self._owner[paper]

    @property
    def n_authors(self) -> int:
        return len(self._portfolio)

    @property
    def n_papers(self) -> int:
        return len(self._owner)

    @cached_property
    def _adjacency(self) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
        refs: dict[str, set[str]] = defaultdict(set)
        cites: dict[str, set[str]] = defaultdict(set)
        for cited, citing in self._edges:
            refs[citing].add(cited)
            cites[cited].add(citing)
        return refs, cites

    def references(self, q: str) -> frozenset[str]:
        """Papers cited by ``q``."""
        return frozenset(self._adjacency[0].get(q, ()))

    def citations(self, p: str) -> frozenset[str]:
        """Papers citing ``p``."""
        return frozenset(self._adjacency[1].get(p, ()))

    def n_references(self, q: str) -> int:
        return len(self._adjacency[0].get(q, ()))

    def n_citations(self, p: str) -> int:
        return len(self._adjacency[1].get(p, ()))

    @cached_property
    def indexed(self) -> _Indexed:
        """Integer-indexed view used by the numerical layers."""
        papers = self.papers
        paper_pos = {p: i for i, p in enumerate(papers)}
        authors = self.authors
        author_pos = {a: i for i, a in enumerate(authors)}
        owner = np.fromiter((author_pos[self._owner[p]] for p in papers), dtype=np.int64, count=len(papers))
        m = len(self._edges)
        cited = np.empty(m, dtype=np.int64)
        citing = np.empty(m, dtype=np.int64)
        for k, (p, q) in enumerate(self._edges):
            cited[k] = paper_pos[p]
            citing[k] = paper_pos[q]
        return _Indexed(papers, paper_pos, authors, author_pos, owner, cited, citing)

    # -- comparisons -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Database):
            return NotImplemented
        return self._portfolio == other._portfolio and self._edges == other._edges

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Database(authors={self.n_authors}, papers={self.n_papers}, edges={len(self._edges)})"


@dataclass(frozen=True)
class DomainReport:
    violations: tuple[tuple[str, tuple[str, ...]], ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.valid:
            return "database is in the domain"
        lines = [f"{rule}: {', '.join(ids)}" for rule, ids in self.violations]
        return "domain violations:\n  " + "\n  ".join(lines)


@dataclass(frozen=True)
class Relabeling:
    authors: Mapping[str, str]
    papers: Mapping[str, str]

    def inverse(self) -> "Relabeling":
        return Relabeling({v: k for k, v in self.authors.items()}, {v: k for k, v in self.papers.items()})


@dataclass(frozen=True)
class FieldPartition:
    components: tuple[frozenset[str], ...]
    papers: tuple[frozenset[str], ...] = field(default=())

    def component_of(self) -> dict[str, int]:
        return {a: i for i, comp in enumerate(self.components) for a in comp}

    def __len__(self) -> int:
        return len(self.components)


def validate_domain(d: Database) -> DomainReport:
    """Report every violated domain condition with its witnesses.

    Portfolios are disjoint by construction, so the first rule can only be
    violated by hand-built inputs that bypass :class:`Database`.
    """
    violations = []
    seen: dict[str, str] = {}
    overlap = []
    for a in d.authors:
        for p in sorted(d.portfolio[a]):
            if p in seen:
                overlap.append(p)
            seen[p] = a
    if overlap:
        violations.append(("overlapping-portfolios", tuple(overlap)))
    selfcites = sorted(f"{q}->{p}" for p, q in d.edges if d.owner(p) == d.owner(q))
    if selfcites:
        violations.append(("self-citation", tuple(selfcites)))
    external = {d.owner(q) for p, q in d.edges if d.owner(p) != d.owner(q)}
    lonely = tuple(a for a in d.authors if a not in external)
    if lonely:
        violations.append(("no-external-reference", lonely))
    return DomainReport(tuple(violations))


def require_domain(d: Database) -> None:
    report = validate_domain(d)
    if not report.valid:
        raise DomainError(report)


# -- transformations ------------------------------------------------------


def disjoint_union(d: Database, d2: Database) -> Database:
    """Union of two databases with disjoint author and paper sets."""
    for a in d.portfolio:
        if a in d2.portfolio:
            raise DatabaseError(f"author id {a!r} occurs in both databases")
    for p in d.papers:
        if p in d2._owner:
            raise DatabaseError(f"paper id {p!r} occurs in both databases")
    return Database({**d.portfolio, **d2.portfolio}, d.edges | d2.edges)


def add_reference(d: Database, cited: str, citing: str, strict: bool = True) -> Database:
    """Return ``d`` with the extra edge "``citing`` cites ``cited``"."""
    for p in (cited, citing):
        if p not in d._owner:
            raise DatabaseError(f"unknown paper {p!r}")
    if (cited, citing) in d.edges:
        raise DatabaseError(f"{citing!r} already cites {cited!r}")
    if strict and d.owner(cited) == d.owner(citing):
        raise DatabaseError(f"{citing!r} and {cited!r} have the same author {d.owner(cited)!r}")
    return Database(d.portfolio, d.edges | {(cited, citing)})


def split_paper(d: Database, q: str, part1: Iterable[str], new_id: str, strict: bool = False) -> Database:
    """Split the uncited paper ``q`` in two.

    ``q`` keeps the references in ``part1``; the fresh paper ``new_id`` (same
    author) takes the remaining ones.  With ``strict=True`` both parts must
    be non-empty.
    """
    if q not in d._owner:
        raise DatabaseError(f"unknown paper {q!r}")
    if d.n_citations(q) > 0:
        raise DatabaseError(f"cannot split {q!r}: it is cited {d.n_citations(q)} times")
    if new_id in d._owner:
        raise DatabaseError(f"paper id {new_id!r} already exists")
    part1 = frozenset(part1)
    refs = d.references(q)
    if not part1 <= refs:
        raise DatabaseError(f"{sorted(part1 - refs)} are not references of {q!r}")
    part2 = refs - part1
    if strict and (not part1 or not part2):
        raise DatabaseError("strict split needs two non-empty reference parts")
    a = d.owner(q)
    edges = {e for e in d.edges if not (e[1] == q and e[0] in part2)}
    edges.update((p, new_id) for p in part2)
    portfolio = dict(d.portfolio)
    portfolio[a] = portfolio[a] | {new_id}
    return Database(portfolio, frozenset(edges))


def permute_citations(d: Database, sigma: Mapping[str, str]) -> Database:
    """Apply ``n'(p, q) = n(p, sigma(q))`` for a portfolio-preserving permutation.

    Papers absent from ``sigma`` are fixed.  Paper ``q`` inherits the
    reference list of ``sigma(q)``.
    """
    full = {p: sigma.get(p, p) for p in d.papers}
    if set(full.values()) != set(full) or len(full) != d.n_papers:
        raise DatabaseError("sigma is not a permutation of the papers")
    for p, s in full.items():
        if p not in d._owner or d.owner(p) != d.owner(s):
            raise DatabaseError(f"sigma maps {p!r} to {s!r} across portfolios")
    inv = {s: p for p, s in full.items()}
    edges = frozenset((p, inv[q]) for p, q in d.edges)
    return Database(d.portfolio, edges)


def reassign_papers(d: Database, new_portfolio: Mapping[str, Iterable[str]], strict: bool = True) -> Database:
    """Same papers and citations, new assignment of papers to authors."""
    new_portfolio = {a: frozenset(ps) for a, ps in new_portfolio.items()}
    allocated = [p for ps in new_portfolio.values() for p in ps]
    if len(allocated) != len(set(allocated)) or set(allocated) != set(d.papers):
        raise DatabaseError("new portfolio is not a partition of the paper set")
    out = Database(new_portfolio, d.edges)
    if strict:
        require_domain(out)
    return out


def relabel(d: Database, r: Relabeling) -> Database:
    """Rename authors and papers through bijections."""
    if sorted(r.authors) != d.authors or len(set(r.authors.values())) != d.n_authors:
        raise DatabaseError("author relabeling is not a bijection on the author set")
    if sorted(r.papers) != d.papers or len(set(r.papers.values())) != d.n_papers:
        raise DatabaseError("paper relabeling is not a bijection on the paper set")
    sp = r.papers
    portfolio = {r.authors[a]: {sp[p] for p in ps} for a, ps in d.portfolio.items()}
    return Database(portfolio, frozenset((sp[p], sp[q]) for p, q in d.edges))


def prefixed(d: Database, prefix: str) -> Database:
    """Relabel every author and paper id by prepending ``prefix``."""
    return relabel(d, Relabeling({a: prefix + a for a in d.authors}, {p: prefix + p for p in d.papers}))


def field_components(d: Database) -> FieldPartition:
    """Connected components of the undirected author citation graph.

    Components are ordered by their smallest author id.
    """
    if d.n_authors == 0:
        return FieldPartition(())
    ix = d.indexed
    n = len(ix.authors)
    rows, cols = ix.owner[ix.cited], ix.owner[ix.citing]
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    groups: dict[int, list[str]] = defaultdict(list)
    for a, lab in zip(ix.authors, labels):
        groups[int(lab)].append(a)
    comps = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    return FieldPartition(
        tuple(frozenset(g) for g in comps),
        tuple(frozenset(p for a in g for p in d.portfolio[a]) for g in comps),
    )


def erase_self_only_authors(d: Database) -> tuple[Database, list[str]]:
    """Repeatedly drop authors without any reference to another author.

    Returns the reduced database and the erased author ids in removal order.
    Authors with no references at all are dropped too, since they hold no
    debt to anyone.
    """
    portfolio = dict(d.portfolio)
    edges = set(d.edges)
    erased: list[str] = []
    while True:
        owner = {p: a for a, ps in portfolio.items() for p in ps}
        external = {owner[q] for p, q in edges if owner[p] != owner[q]}
        gone = sorted(a for a in portfolio if a not in external)
        if not gone:
            break
        dead = set().union(*(portfolio.pop(a) for a in gone))
        edges = {e for e in edges if e[0] not in dead and e[1] not in dead}
        erased.extend(gone)
    if not portfolio:
        raise DatabaseError("no eligible authors: every author cites only their own papers")
    return Database(portfolio, frozenset(edges)), erased
