import pytest
from hypothesis import given, strategies as st

from citeinfluence.counting import (
    CitationMultiset,
    UncitedAuthorError,
    canonical_reduction,
    citation_multiset,
    citation_share_index,
    citing_author_count,
    comparable_direct_index,
    comprehensive_index,
    euclidean_index,
    external_second_order_citations,
    fractional_count,
    h_index,
    independence_indices,
    own_reference_count,
    registry,
)
from citeinfluence.generators import fixture
from citeinfluence.model import Database, disjoint_union, prefixed, split_paper, validate_domain

import oracles
from conftest import domain_databases

counts_lists = st.lists(st.integers(0, 12), max_size=10)


class TestMultiset:
    def test_histogram(self):
        d = Database(
            {"a": ["x", "y", "z"], "b": ["b1", "b2", "b3"]},
            [("x", "b1"), ("x", "b2"), ("x", "b3"), ("y", "b1"), ("y", "b2"), ("y", "b3"), ("b1", "x")],
        )
        m = citation_multiset(d, "a")
        assert m.counts == {3: 2, 0: 1}
        assert m.values() == [3, 3, 0]
        assert m.n_papers == 3

    def test_same_counts_ignores_zero_multiplicity(self):
        assert CitationMultiset({1: 2, 4: 0}).same_counts(CitationMultiset({1: 2}))


class TestCountingSchemes:
    def test_h_examples(self):
        assert h_index(CitationMultiset.from_values([5, 4, 3, 2, 1])) == 3
        assert h_index(CitationMultiset.from_values([])) == 0
        assert h_index(CitationMultiset.from_values([0, 0, 0])) == 0
        assert h_index(CitationMultiset.from_values([3, 4])) == 2

    def test_euclid_examples(self):
        assert euclidean_index(CitationMultiset.from_values([3, 4])) == 5.0
        assert euclidean_index(CitationMultiset.from_values([])) == 0.0

    @given(counts_lists)
    def test_h_brute_force(self, counts):
        assert h_index(CitationMultiset.from_values(counts)) == oracles.h_brute(counts)

    @given(counts_lists)
    def test_euclid_direct(self, counts):
        assert euclidean_index(CitationMultiset.from_values(counts)) == pytest.approx(oracles.euclid_brute(counts), rel=1e-12)


class TestDirectIndices:
    def test_fractional(self):
        d = Database({"a": ["p"], "b": ["q"], "c": ["r"]}, [("p", "q"), ("r", "q"), ("q", "p"), ("q", "r")])
        assert fractional_count(d, "a") == 0.5
        assert fractional_count(Database({"a": ["p"], "b": ["q"]}, [("p", "q")]), "b") == 0.0

    def test_split_changes_fractional_not_h(self):
        d = Database({"a": ["p"], "c": ["r"], "b": ["q"]}, [("p", "q"), ("r", "q")])
        d2 = split_paper(d, "q", {"p"}, "q2")
        assert [fractional_count(d, a) for a in "ac"] == [0.5, 0.5]
        assert [fractional_count(d2, a) for a in "ac"] == [1.0, 1.0]
        h = registry()["h"]
        assert h.scores(d) == h.scores(d2)

    def test_comparable_direct(self):
        d = Database({"a": ["p"], "b": ["q1", "q2"]}, [("p", "q1"), ("q1", "p")])
        assert comparable_direct_index(d, "a") == 0.5  # b's unit shared by b's two papers
        assert comparable_direct_index(d, "b") == 1.0
        assert comparable_direct_index(Database({"a": ["p"], "b": ["q"]}, [("p", "q")]), "b") == 0.0

    @given(domain_databases(allow_leaks=False))
    def test_comparable_direct_sums_to_size(self, d):
        # every paper cites, so each author hands out exactly one unit
        total = sum(comparable_direct_index(d, a) for a in d.authors)
        assert total == pytest.approx(d.n_authors, rel=1e-12)

    def test_comparable_direct_leaks_reference_less_papers(self):
        d = Database({"a": ["p"], "b": ["q1", "q2"]}, [("p", "q1"), ("q1", "p")])
        assert comparable_direct_index(d, "a") + comparable_direct_index(d, "b") == 1.5

    def test_comprehensive(self):
        d = fixture("chain-3")
        assert comprehensive_index(d, "a") == 1  # q cites p and r cites q
        assert comprehensive_index(d, "b") == 0
        assert comprehensive_index(Database({"a": ["p"], "b": ["q"]}, [("p", "q")]), "a") == 0


class TestIndependenceIndices:
    def test_names_and_designated_axioms(self):
        got = {ix.name: ix.violates for ix in independence_indices()}
        assert set(got.values()) == {
            "separability", "reference-independence", "splitting", "citation-anonymity", "author-anonymity",
        }  # fmt: skip

    def test_own_references_mutual(self, mutual_pair):
        assert own_reference_count(mutual_pair, "a") == own_reference_count(mutual_pair, "b") == 1

    def test_citing_authors_counts_once(self):
        d = Database({"a": ["p1", "p2"], "b": ["q"]}, [("p1", "q"), ("p2", "q"), ("q", "p1")])
        assert citing_author_count(d, "a") == 1
        assert citation_share_index(d, "a") == 2 / 2

    def test_share_changes_under_union(self, mutual_pair):
        before = citation_share_index(mutual_pair, "a")
        after = citation_share_index(disjoint_union(mutual_pair, prefixed(mutual_pair, "x")), "a")
        assert (before, after) == (1.0, 1 / 3)

    def test_external_second_order(self):
        # q cites a's p; q is cited by r (c) and by a's own p2
        d = Database(
            {"a": ["p", "p2"], "b": ["q"], "c": ["r"]},
            [("p", "q"), ("q", "r"), ("q", "p2"), ("r", "q")],
        )
        assert external_second_order_citations(d, "a") == 1


class TestReduction:
    def test_counts_preserved(self):
        d = Database(
            {"a": ["x", "y"], "b": ["b1", "b2"], "c": ["c1"]},
            [("x", "b1"), ("x", "c1"), ("y", "b2"), ("b1", "x"), ("c1", "b1")],
        )
        r = canonical_reduction(d, "a")
        assert r.authors == ["a", "b"]
        assert len(r.portfolio["b"]) == 3
        assert citation_multiset(r, "a").same_counts(citation_multiset(d, "a"))
        assert validate_domain(r).valid
        assert ("b.0", "x") in r.edges  # smallest paper of a cites smallest of b

    def test_name_collision(self):
        d = Database({"b": ["p"], "c": ["q"]}, [("p", "q"), ("q", "p")])
        r = canonical_reduction(d, "b")
        assert r.authors == ["b", "b'"]

    def test_uncited(self):
        with pytest.raises(UncitedAuthorError):
            canonical_reduction(fixture("chain-3"), "c")

    @given(domain_databases())
    def test_counting_schemes_invariant(self, d):
        reg = registry()
        for a in d.authors:
            if not any(d.n_citations(p) for p in d.portfolio[a]):
                continue
            r = canonical_reduction(d, a)
            assert validate_domain(r).valid
            for name in ("h", "euclid"):
                assert reg[name](r, a) == reg[name](d, a)


def test_registry_contents():
    reg = registry()
    assert {"h", "euclid", "comparable-direct", "comprehensive", "influence"} <= set(reg)
    assert len(reg) == 10
    assert reg["h"].kind == "counting-scheme"
    assert reg["influence"](fixture("mutual-pair"), "a") == pytest.approx(1.0)
