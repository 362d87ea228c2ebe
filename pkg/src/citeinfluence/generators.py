"""Seeded synthetic databases and the hand-transcribed proof fixtures."""

from __future__ import annotations

import numpy as np

from .model import Database, DatabaseError


def _as_range(r: int | tuple[int, int]) -> tuple[int, int]:
    if isinstance(r, int):
        return r, r
    lo, hi = r
    if lo > hi:
        raise DatabaseError(f"empty range {r!r}")
    return int(lo), int(hi)


def generate_random_db(
    n_authors: int,
    papers_per_author: int | tuple[int, int] = (1, 3),
    refs_per_paper: int | tuple[int, int] = (0, 3),
    n_fields: int = 1,
    seed: int = 0,
) -> Database:
    """Random database in the domain, deterministic in its arguments.

    Authors are dealt into ``n_fields`` fields of near-equal size.  Every
    reference points to a paper of another author of the same field, so
    fields never cite each other.  Ranges are inclusive ``(lo, hi)`` pairs.
    A repair pass adds one reference for any author left without an
    external one.
    """
    if n_authors < 1 or n_fields < 1:
        raise DatabaseError("sizes must be positive")
    p_lo, p_hi = _as_range(papers_per_author)
    r_lo, r_hi = _as_range(refs_per_paper)
    if p_lo < 1 or r_lo < 0:
        raise DatabaseError("every author needs at least one paper; reference counts are non-negative")
    if n_authors < 2 * n_fields:
        raise DatabaseError(
            f"{n_authors} authors cannot fill {n_fields} fields: each field needs two authors to cite each other"
        )

    rng = np.random.default_rng(seed)
    n_papers_of = rng.integers(p_lo, p_hi + 1, size=n_authors)
    # field f holds authors [bounds[f], bounds[f + 1])
    bounds = np.linspace(0, n_authors, n_fields + 1).round().astype(np.int64)
    first_paper = np.concatenate(([0], np.cumsum(n_papers_of)))
    total = int(first_paper[-1])

    wa = len(str(n_authors - 1))
    wp = len(str(total - 1))
    author_ids = [f"a{i:0{wa}d}" for i in range(n_authors)]
    paper_ids = [f"p{j:0{wp}d}" for j in range(total)]

    cited_chunks: list[np.ndarray] = []
    citing_chunks: list[np.ndarray] = []
    for f in range(n_fields):
        a0, a1 = int(bounds[f]), int(bounds[f + 1])
        f0, f1 = int(first_paper[a0]), int(first_paper[a1])
        for a in range(a0, a1):
            own0, own1 = int(first_paper[a]), int(first_paper[a + 1])
            pool = (f1 - f0) - (own1 - own0)
            n_refs = rng.integers(r_lo, r_hi + 1, size=own1 - own0)
            np.minimum(n_refs, pool, out=n_refs)
            has_external = bool(n_refs.sum())
            if not has_external:
                n_refs[rng.integers(0, own1 - own0)] = 1
            for q, k in zip(range(own0, own1), n_refs):
                if k == 0:
                    continue
                picks = rng.choice(pool, size=int(k), replace=False) + f0
                # skip over the author's own block
                picks[picks >= own0] += own1 - own0
                cited_chunks.append(picks)
                citing_chunks.append(np.full(int(k), q, dtype=np.int64))

    cited = np.concatenate(cited_chunks) if cited_chunks else np.empty(0, dtype=np.int64)
    citing = np.concatenate(citing_chunks) if citing_chunks else np.empty(0, dtype=np.int64)
    portfolio = {
        author_ids[a]: paper_ids[int(first_paper[a]) : int(first_paper[a + 1])] for a in range(n_authors)
    }
    edges = frozenset(zip([paper_ids[i] for i in cited.tolist()], [paper_ids[i] for i in citing.tolist()]))
    return Database(portfolio, edges)


def _db(portfolio: dict[str, list[str]], cites: list[tuple[str, str]]) -> Database:
    # fixtures are written as (citing, cited) arrows, like the figures
    return Database.from_lists(portfolio, [(cited, citing) for citing, cited in cites])


def _impossibility_edges() -> list[tuple[str, str]]:
    return [
        ("pa", "pb"), ("pb", "pa"), ("pc", "pb"), ("pe", "pb"),
        ("pz1", "py"), ("pz2", "py"), ("py", "px"), ("px", "py"),
    ]  # fmt: skip


def _two_field_doubled() -> Database:
    # every paper cites; each paper of s, t is cited twice, each of u, v once
    return _db(
        {"s": ["s1", "s2"], "t": ["t1", "t2"], "u": ["u1", "u2"], "v": ["v1", "v2"]},
        [
            ("s1", "t1"), ("s1", "t2"), ("s2", "t1"), ("s2", "t2"),
            ("t1", "s1"), ("t1", "s2"), ("t2", "s1"), ("t2", "s2"),
            ("u1", "v1"), ("u2", "v2"), ("v1", "u1"), ("v2", "u2"),
        ],
    )  # fmt: skip


_FIXTURES = {
    "mutual-pair": lambda: _db({"a": ["p"], "b": ["q"]}, [("p", "q"), ("q", "p")]),
    # q cites p, r cites q; not in the domain (a cites nobody)
    "chain-3": lambda: _db({"a": ["p"], "b": ["q"], "c": ["r"]}, [("q", "p"), ("r", "q")]),
    # u and v both cite w, w cites v; merging u into v gives the next one
    "merge-aux": lambda: _db({"u": ["pu"], "v": ["pv"], "w": ["pw"]}, [("pu", "pw"), ("pv", "pw"), ("pw", "pv")]),
    "merge-aux-merged": lambda: _db({"v": ["pu", "pv"], "w": ["pw"]}, [("pu", "pw"), ("pv", "pw"), ("pw", "pv")]),
    "impossibility-d": lambda: _db(
        {"a": ["pa"], "b": ["pb"], "c": ["pc"], "e": ["pe"], "z": ["pz1", "pz2"], "y": ["py"], "x": ["px"]},
        _impossibility_edges(),
    ),
    # c takes e's paper, e takes one of z's papers
    "impossibility-d2": lambda: _db(
        {"a": ["pa"], "b": ["pb"], "c": ["pc", "pe"], "e": ["pz2"], "z": ["pz1"], "y": ["py"], "x": ["px"]},
        _impossibility_edges(),
    ),
    "two-field-doubled": _two_field_doubled,
}

FIXTURE_NAMES = tuple(_FIXTURES)


def fixture(name: str) -> Database:
    """Canonical small database by name (see ``FIXTURE_NAMES``)."""
    try:
        return _FIXTURES[name]()
    except KeyError:
        raise DatabaseError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from None
