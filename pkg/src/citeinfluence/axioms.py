"""Executable axioms: metamorphic checks, witness search and the impossibility script.

Each axiom is a database transformation together with the set of authors
whose score it must leave unchanged.  A checker applies the transformation,
re-evaluates the index and reports either ``holds-on-sample`` or a concrete
witness of the violation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .counting import IndexDescriptor
from .generators import fixture, generate_random_db
from .model import (
    Database,
    DatabaseError,
    Relabeling,
    add_reference,
    disjoint_union,
    field_components,
    permute_citations,
    prefixed,
    reassign_papers,
    relabel,
    require_domain,
    split_paper,
    validate_domain,
)

REAL_TOL = 1e-9
POSITIVE_TOL = 1e-12
EXHAUSTIVE_COMPONENTS = 16

TRANSFORM_AXIOMS = (
    "separability",
    "reference-independence",
    "splitting",
    "citation-anonymity",
    "author-anonymity",
    "neutrality",
)
AXIOMS = TRANSFORM_AXIOMS + ("field-comparability", "null-author")

DEFAULT_GENERATOR = {"n_authors": (3, 7), "papers_per_author": (1, 3), "refs_per_paper": (0, 3), "n_fields": 1}


# -- transformations ----------------------------------------------------------


@dataclass(frozen=True)
class Transform:
    """A database transformation tied to one axiom."""

    axiom: str
    args: Mapping[str, Any]

    def apply(self, d: Database) -> Database:
        a = self.args
        if self.axiom == "separability":
            return disjoint_union(d, a["other"])
        if self.axiom == "reference-independence":
            return add_reference(d, a["cited"], a["citing"])
        if self.axiom == "splitting":
            return split_paper(d, a["paper"], a["part1"], a["new_id"])
        if self.axiom == "citation-anonymity":
            return permute_citations(d, a["sigma"])
        if self.axiom == "author-anonymity":
            return reassign_papers(d, a["portfolio"])
        if self.axiom == "neutrality":
            return relabel(d, a["relabeling"])
        raise DatabaseError(f"no transformation for axiom {self.axiom!r}")

    def protected(self, d: Database, d2: Database) -> list[tuple[str, str]]:
        """Pairs ``(author in d, author in d2)`` whose scores must coincide."""
        if self.axiom == "reference-independence":
            a = d.owner(self.args["citing"])
            return [(a, a)]
        if self.axiom == "author-anonymity":
            return [(a, a) for a in d.authors if a in d2.portfolio and d.portfolio[a] == d2.portfolio[a]]
        if self.axiom == "neutrality":
            pi = self.args["relabeling"].authors
            return [(a, pi[a]) for a in d.authors]
        return [(a, a) for a in d.authors]

    def describe(self) -> dict:
        out = {"axiom": self.axiom}
        for k, v in self.args.items():
            if isinstance(v, Database):
                out[k] = f"<database with {v.n_authors} authors>"
            elif isinstance(v, Relabeling):
                out[k] = {"authors": dict(v.authors), "papers": dict(v.papers)}
            elif isinstance(v, (set, frozenset)):
                out[k] = sorted(v)
            elif isinstance(v, Mapping):
                out[k] = {kk: sorted(vv) if isinstance(vv, (set, frozenset)) else vv for kk, vv in v.items()}
            else:
                out[k] = v
        return out


@dataclass
class Witness:
    database: Database
    transformed: Database | None
    transform: dict | None
    author: str
    before: float
    after: float
    detail: dict = field(default_factory=dict)


@dataclass
class AxiomVerdict:
    axiom: str
    index: str
    outcome: str  # "holds-on-sample", "violated" or "vacuous"
    witness: Witness | None = None
    trials: int = 1
    seed: int | None = None
    trial: int | None = None  # trial that produced the witness
    detail: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.outcome == "violated"


def _tolerance(index: IndexDescriptor) -> float:
    return 0.0 if index.integer_valued else REAL_TOL


def check_axiom(index: IndexDescriptor, axiom: str, d: Database, transform: Transform) -> AxiomVerdict:
    """Apply ``transform`` and compare the index on every protected author."""
    if axiom not in TRANSFORM_AXIOMS:
        raise DatabaseError(f"{axiom!r} is not a transformation axiom")
    if transform.axiom != axiom:
        raise DatabaseError(f"transform is for {transform.axiom!r}, not {axiom!r}")
    require_domain(d)
    if axiom == "splitting" and d.n_citations(transform.args["paper"]) != 0:
        raise DatabaseError("splitting needs an uncited paper")
    if axiom == "reference-independence":
        citing, cited = transform.args["citing"], transform.args["cited"]
        if d.owner(citing) == d.owner(cited):
            raise DatabaseError("reference independence adds a reference to another author's paper")
    d2 = transform.apply(d)
    before, after = index.scores(d), index.scores(d2)
    tol = _tolerance(index)
    worst = None
    for a, a2 in transform.protected(d, d2):
        gap = abs(before[a] - after[a2])
        if gap > tol and (worst is None or gap > worst[0]):
            worst = (gap, a, before[a], after[a2])
    if worst is None:
        return AxiomVerdict(axiom, index.name, "holds-on-sample")
    _, a, b, c = worst
    return AxiomVerdict(axiom, index.name, "violated", Witness(d, d2, transform.describe(), a, b, c))


def check_field_comparability(index: IndexDescriptor, d: Database) -> AxiomVerdict:
    """Compare group means over bipartitions of the citation-disjoint components."""
    comps = field_components(d)
    if len(comps) < 2:
        return AxiomVerdict("field-comparability", index.name, "vacuous", detail={"components": len(comps)})
    scores = index.scores(d)
    sums = np.array([sum(scores[a] for a in c) for c in comps.components])
    sizes = np.array([len(c) for c in comps.components], dtype=float)
    k = len(comps)
    if k <= EXHAUSTIVE_COMPONENTS:
        # fix component 0 on the left to avoid mirrored duplicates
        splits = [
            (0,) + rest
            for r in range(0, k - 1)
            for rest in itertools.combinations(range(1, k), r)
        ]
        exhaustive = True
    else:
        order = np.argsort(sums / sizes)
        splits = [tuple(order[:i]) for i in range(1, k)]
        exhaustive = False
    worst = None
    for left in splits:
        mask = np.zeros(k, dtype=bool)
        mask[list(left)] = True
        m1 = sums[mask].sum() / sizes[mask].sum()
        m2 = sums[~mask].sum() / sizes[~mask].sum()
        gap = abs(m1 - m2)
        if worst is None or gap > worst[0]:
            worst = (gap, left, m1, m2)
    gap, left, m1, m2 = worst
    detail = {
        "component_means": (sums / sizes).tolist(),
        "component_sizes": sizes.astype(int).tolist(),
        "worst_split": [sorted(comps.components[i]) for i in left],
        "means": (float(m1), float(m2)),
        "ratio": float(m1 / m2) if m2 else float("inf"),
        "exhaustive": exhaustive,
    }
    ok = gap <= REAL_TOL * max(1.0, abs(m1), abs(m2))
    if ok:
        return AxiomVerdict("field-comparability", index.name, "holds-on-sample", detail=detail)
    first = sorted(comps.components[left[0]])[0]
    w = Witness(d, None, None, first, float(m1), float(m2), detail)
    return AxiomVerdict("field-comparability", index.name, "violated", w, detail=detail)


def check_null_author(index: IndexDescriptor, d: Database) -> AxiomVerdict:
    """An author scores positive exactly when one of its papers is cited."""
    scores = index.scores(d)
    bad = []
    for a in d.authors:
        positive = scores[a] > POSITIVE_TOL
        cited = any(d.n_citations(p) > 0 for p in d.portfolio[a])
        if positive != cited:
            bad.append((a, scores[a], cited))
    detail = {"scores": scores}
    if not bad:
        return AxiomVerdict("null-author", index.name, "holds-on-sample", detail=detail)
    a, s, cited = bad[0]
    detail["offenders"] = [x[0] for x in bad]
    w = Witness(d, None, None, a, s, s, {"cited": cited})
    return AxiomVerdict("null-author", index.name, "violated", w, detail=detail)


# -- random transformations --------------------------------------------------


def _pick(rng: np.random.Generator, seq):
    seq = list(seq)
    return seq[int(rng.integers(len(seq)))]


def random_transform(axiom: str, d: Database, rng: np.random.Generator) -> Transform | None:
    """A random transformation of ``d`` meeting the axiom's preconditions, or None."""
    if axiom == "separability":
        other = generate_random_db(int(rng.integers(2, 6)), (1, 3), (0, 3), 1, seed=int(rng.integers(2**31)))
        prefix = "x:"
        while any(a.startswith(prefix) for a in d.authors) or any(p.startswith(prefix) for p in d.papers):
            prefix += "x:"
        return Transform(axiom, {"other": prefixed(other, prefix)})

    if axiom == "reference-independence":
        for _ in range(20):
            citing = _pick(rng, d.papers)
            a = d.owner(citing)
            options = [p for p in d.papers if d.owner(p) != a and (p, citing) not in d.edges]
            if options:
                return Transform(axiom, {"cited": _pick(rng, options), "citing": citing})
        return None

    if axiom == "splitting":
        cands = [q for q in d.papers if d.n_citations(q) == 0 and d.n_references(q) >= 2]
        if not cands:
            cands = [q for q in d.papers if d.n_citations(q) == 0]
        if not cands:
            return None
        q = _pick(rng, cands)
        refs = sorted(d.references(q))
        if len(refs) >= 2:
            k = int(rng.integers(1, len(refs)))
            part1 = set(rng.choice(refs, size=k, replace=False).tolist())
        else:
            part1 = set(refs) if rng.random() < 0.5 else set()
        new_id = q + "'"
        while new_id in d.papers:
            new_id += "'"
        return Transform(axiom, {"paper": q, "part1": frozenset(part1), "new_id": new_id})

    if axiom == "citation-anonymity":
        sigma = {}
        for a in d.authors:
            ps = sorted(d.portfolio[a])
            if len(ps) >= 2 and rng.random() < 0.7:
                sigma.update(zip(ps, rng.permutation(ps).tolist()))
        if not sigma:
            return None
        return Transform(axiom, {"sigma": sigma})

    if axiom == "author-anonymity":
        if d.n_authors < 3:
            return None
        for _ in range(30):
            keep = _pick(rng, d.authors)
            port = {a: set(ps) for a, ps in d.portfolio.items()}
            others = [a for a in d.authors if a != keep]
            movable = [p for p in d.papers if d.owner(p) != keep]
            for _ in range(int(rng.integers(1, 4))):
                p = _pick(rng, movable)
                src = next(a for a in others if p in port[a])
                dst = _pick(rng, others)
                if dst == src or len(port[src]) == 1:
                    continue
                port[src].discard(p)
                port[dst].add(p)
            if all(port[a] == d.portfolio[a] for a in others):
                continue
            candidate = Database(port, d.edges)
            if validate_domain(candidate).valid:
                return Transform(axiom, {"portfolio": {a: frozenset(ps) for a, ps in port.items()}})
        return None

    if axiom == "neutrality":
        authors, papers = d.authors, d.papers
        r = Relabeling(
            dict(zip(authors, rng.permutation(authors).tolist())),
            dict(zip(papers, rng.permutation(papers).tolist())),
        )
        return Transform(axiom, {"relabeling": r})

    raise DatabaseError(f"unknown axiom {axiom!r}")


def sample_database(gen: Mapping[str, Any], rng: np.random.Generator) -> Database:
    """Draw one database; ``n_authors`` may be an inclusive ``(lo, hi)`` range."""
    g = dict(gen)
    n = g.pop("n_authors")
    if isinstance(n, (tuple, list)):
        n = int(rng.integers(n[0], n[1] + 1))
    return generate_random_db(n, seed=int(rng.integers(2**31)), **g)


def run_trial(
    index: IndexDescriptor,
    axiom: str,
    seed: int,
    trial: int,
    generator: Mapping[str, Any] | None = None,
    database: Database | None = None,
) -> AxiomVerdict | None:
    """One reproducible trial; None when the sampled database admits no transformation."""
    rng = np.random.default_rng([seed, trial])
    d = database if database is not None else sample_database(generator or DEFAULT_GENERATOR, rng)
    if axiom == "field-comparability":
        return check_field_comparability(index, d)
    if axiom == "null-author":
        return check_null_author(index, d)
    t = random_transform(axiom, d, rng)
    if t is None:
        return None
    return check_axiom(index, axiom, d, t)


def find_violation(
    index: IndexDescriptor,
    axiom: str,
    generator: Mapping[str, Any] | None = None,
    seed: int = 0,
    budget: int = 500,
    database: Database | None = None,
) -> AxiomVerdict:
    """Randomized witness search; returns the lowest-numbered violating trial.

    Each trial draws a database (unless ``database`` is fixed) and a
    transformation from ``numpy.random.default_rng([seed, trial])``, so any
    witness can be replayed with :func:`run_trial`.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1 trial")
    if axiom not in AXIOMS:
        raise DatabaseError(f"unknown axiom {axiom!r}; known: {', '.join(AXIOMS)}")
    applicable = 0
    for t in range(budget):
        v = run_trial(index, axiom, seed, t, generator, database)
        if v is None or v.outcome == "vacuous":
            continue
        applicable += 1
        if v.violated:
            v.trials, v.seed, v.trial = t + 1, seed, t
            return v
    return AxiomVerdict(axiom, index.name, "holds-on-sample", trials=budget, seed=seed,
                        detail={"applicable_trials": applicable})  # fmt: skip


# -- impossibility -------------------------------------------------------------


@dataclass
class ImpossibilityReport:
    index: str
    null_author: bool
    field_comparability: bool
    author_anonymity: bool
    detail: dict

    @property
    def failed(self) -> list[str]:
        names = ("null-author", "field-comparability", "author-anonymity")
        flags = (self.null_author, self.field_comparability, self.author_anonymity)
        return [n for n, ok in zip(names, flags) if not ok]


def demonstrate_impossibility(index: IndexDescriptor) -> ImpossibilityReport:
    """Run the two-fixture argument and report which of the three properties fail.

    The fixtures differ only in who wrote the papers of c, e and z; a, b, x
    and y keep their portfolios, while the two fields swap sizes (4 and 3
    authors, then 3 and 4).
    """
    d, d2 = fixture("impossibility-d"), fixture("impossibility-d2")
    na = [check_null_author(index, x) for x in (d, d2)]
    fc = [check_field_comparability(index, x) for x in (d, d2)]
    s1, s2 = index.scores(d), index.scores(d2)
    tol = _tolerance(index)
    kept = [a for a in d.authors if d.portfolio[a] == d2.portfolio[a]]
    shifts = {a: s2[a] - s1[a] for a in kept}
    return ImpossibilityReport(
        index.name,
        null_author=all(not v.violated for v in na),
        field_comparability=all(not v.violated for v in fc),
        author_anonymity=all(abs(x) <= tol for x in shifts.values()),
        detail={
            "field_means": [v.detail.get("component_means") for v in fc],
            "score_shift": shifts,
            "null_author_offenders": [v.detail.get("offenders", []) for v in na],
        },
    )
