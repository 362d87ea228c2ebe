import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from citeinfluence import Database  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def domain_databases(draw, max_authors=6, max_papers=3, allow_leaks=True):
    """Databases in the domain, built independently of the package generator."""
    n = draw(st.integers(2, max_authors))
    portfolio = {}
    k = 0
    for i in range(n):
        m = draw(st.integers(1, max_papers))
        portfolio[f"a{i}"] = [f"p{k + j}" for j in range(m)]
        k += m
    owner = {p: a for a, ps in portfolio.items() for p in ps}
    papers = sorted(owner)
    cross = [(p, q) for p in papers for q in papers if owner[p] != owner[q]]
    picked = draw(st.lists(st.sampled_from(cross), unique=True, max_size=3 * len(papers)))
    edges = set(picked)
    for a, ps in portfolio.items():
        if not any(owner[q] == a for _, q in edges):
            q = draw(st.sampled_from(ps))
            p = draw(st.sampled_from([x for x in papers if owner[x] != a]))
            edges.add((p, q))
    if not allow_leaks:
        for q in papers:
            if not any(c == q for _, c in edges):
                edges.add((draw(st.sampled_from([x for x in papers if owner[x] != owner[q]])), q))
    return Database(portfolio, edges)


@pytest.fixture
def mutual_pair():
    return Database({"a": ["p"], "b": ["q"]}, [("p", "q"), ("q", "p")])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
