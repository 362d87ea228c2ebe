"""Citation-counting schemes, the example indices and the index registry.

A citation-counting scheme scores an author from nothing but the multiset
of citation counts of that author's papers.  The registry also carries non-counting
indices so the axiom harness can treat every index the same way.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Literal

from .author_influence import influence_index
from .model import Database, DatabaseError
from .paper_influence import InfluenceParams

Scores = dict[str, float]


class UncitedAuthorError(DatabaseError):
    """The canonical reduction is undefined for an author with no citation."""


@dataclass(frozen=True)
class CitationMultiset:
    """Number of the owner's papers receiving exactly ``k`` citations, for each ``k``."""

    counts: dict[int, int]
    owner: str = ""

    @classmethod
    def from_values(cls, values, owner: str = "") -> "CitationMultiset":
        return cls(dict(Counter(int(v) for v in values)), owner)

    def values(self) -> list[int]:
        """Citation counts, largest first."""
        return sorted((k for k, m in self.counts.items() for _ in range(m)), reverse=True)

    @property
    def n_papers(self) -> int:
        return sum(self.counts.values())

    def same_counts(self, other: "CitationMultiset") -> bool:
        return {k: m for k, m in self.counts.items() if m} == {k: m for k, m in other.counts.items() if m}


def citation_multiset(d: Database, a: str) -> CitationMultiset:
    if a not in d.portfolio:
        raise DatabaseError(f"unknown author {a!r}")
    return CitationMultiset.from_values((d.n_citations(p) for p in d.portfolio[a]), owner=a)


def h_index(m: CitationMultiset) -> int:
    """Largest ``h`` such that ``h`` papers have at least ``h`` citations each."""
    h = 0
    for i, c in enumerate(m.values(), start=1):
        if c < i:
            break
        h = i
    return h


def euclidean_index(m: CitationMultiset) -> float:
    return math.sqrt(sum(mult * k * k for k, mult in m.counts.items()))


def fractional_count(d: Database, a: str) -> float:
    """Each citing paper contributes one over its number of references."""
    return math.fsum(1.0 / d.n_references(q) for p in d.portfolio[a] for q in d.citations(p))


def comparable_direct_index(d: Database, a: str) -> float:
    """Fractional count where every citing author's papers share one unit."""
    n_papers = {b: len(ps) for b, ps in d.portfolio.items()}
    return math.fsum(
        1.0 / (n_papers[d.owner(q)] * d.n_references(q)) for p in d.portfolio[a] for q in d.citations(p)
    )


def comprehensive_index(d: Database, a: str) -> int:
    # a paper citing two of a's papers is counted twice
    return sum(d.n_citations(q) for p in d.portfolio[a] for q in d.citations(p))


# -- the five indices from the independence part of the characterization --


def citation_share_index(d: Database, a: str) -> float:
    """Citations received by ``a`` over the references made by all other authors."""
    received = sum(d.n_citations(p) for p in d.portfolio[a])
    own_refs = sum(d.n_references(q) for q in d.portfolio[a])
    others = len(d.edges) - own_refs
    return received / others if others else 0.0


def own_reference_count(d: Database, a: str) -> int:
    return sum(d.n_references(q) for q in d.portfolio[a])


def external_second_order_citations(d: Database, a: str) -> int:
    """Citations of the papers citing ``a``, excluding those issued by ``a``."""
    mine = d.portfolio[a]
    citing = set().union(*(d.citations(p) for p in mine)) if mine else set()
    return sum(len(d.citations(q) - mine) for q in citing)


def citing_author_count(d: Database, a: str) -> int:
    return len({d.owner(q) for p in d.portfolio[a] for q in d.citations(p)})


# -- canonical reduction ---------------------------------------------------


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def canonical_reduction(d: Database, a: str) -> Database:
    """Two-author database preserving every citation count of ``a``.

    A new author ``b`` writes one single-reference paper per citation that
    ``a`` receives.  The smallest paper of ``a`` cites the smallest paper of
    ``b`` so the result stays in the domain.
    """
    if a not in d.portfolio:
        raise DatabaseError(f"unknown author {a!r}")
    mine = sorted(d.portfolio[a])
    total = sum(d.n_citations(p) for p in mine)
    if total == 0:
        raise UncitedAuthorError(f"author {a!r} has no citation; the reduction is undefined")
    b = _fresh("b", {a})
    width = len(str(total - 1))
    taken = set(mine)
    b_papers = [_fresh(f"{b}.{i:0{width}d}", taken) for i in range(total)]
    edges = []
    it = iter(b_papers)
    for p in mine:
        edges.extend((p, next(it)) for _ in range(d.n_citations(p)))
    edges.append((b_papers[0], mine[0]))
    return Database({a: mine, b: b_papers}, frozenset(edges))


# -- registry ---------------------------------------------------------------


@dataclass(frozen=True)
class IndexDescriptor:
    """A named index; ``scores(d)`` returns every author's value."""

    name: str
    kind: Literal["counting-scheme", "non-counting"]
    scores: Callable[[Database], Scores]
    integer_valued: bool = False
    violates: str | None = None  # designated axiom for the independence examples
    description: str = ""

    def __call__(self, d: Database, a: str) -> float:
        return self.scores(d)[a]


def _per_author(fn) -> Callable[[Database], Scores]:
    return lambda d: {a: fn(d, a) for a in d.authors}


def _counting(fn) -> Callable[[Database], Scores]:
    return lambda d: {a: fn(citation_multiset(d, a)) for a in d.authors}


def independence_indices() -> list[IndexDescriptor]:
    """The five indices each violating exactly one characterizing axiom."""
    return [
        IndexDescriptor("citation-share", "non-counting", _per_author(citation_share_index),
                        violates="separability", description="citations received / references of others"),
        IndexDescriptor("own-references", "non-counting", _per_author(own_reference_count), True,
                        violates="reference-independence", description="number of own references"),
        IndexDescriptor("fractional", "non-counting", _per_author(fractional_count),
                        violates="splitting", description="fractional citation count"),
        IndexDescriptor("external-second-order", "non-counting", _per_author(external_second_order_citations), True,
                        violates="citation-anonymity", description="citations of citing papers, not issued by a"),
        IndexDescriptor("citing-authors", "non-counting", _per_author(citing_author_count), True,
                        violates="author-anonymity", description="number of distinct citing authors"),
    ]  # fmt: skip


def influence_descriptor(params: InfluenceParams | None = None) -> IndexDescriptor:
    params = params or InfluenceParams()
    return IndexDescriptor(
        "influence",
        "non-counting",
        lambda d: influence_index(d, params).per_author,
        description=f"discounted influence index, delta={params.delta}",
    )


def registry(params: InfluenceParams | None = None) -> dict[str, IndexDescriptor]:
    """Every available index by name, the discounted influence index included."""
    base = [
        IndexDescriptor("h", "counting-scheme", _counting(h_index), True, description="Hirsch h-index"),
        IndexDescriptor("euclid", "counting-scheme", _counting(euclidean_index), description="Euclidean index"),
        IndexDescriptor("comparable-direct", "non-counting", _per_author(comparable_direct_index),
                        description="direct influence, comparable across fields"),
        IndexDescriptor("comprehensive", "non-counting", _per_author(comprehensive_index), True,
                        description="citations received by citing papers"),
    ]  # fmt: skip
    out = {ix.name: ix for ix in base + independence_indices()}
    out["influence"] = influence_descriptor(params)
    return out
