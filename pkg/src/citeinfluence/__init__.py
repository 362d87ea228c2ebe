"""Discounted influence indices, citation-counting schemes and executable axioms."""

from .author_influence import (
    AuthorInfluenceResult,
    WeightScheme,
    alpha_from_activity,
    author_influence_matrix,
    bilateral_author_influence,
    concave_index,
    influence_index,
    normalizer_p_prime,
    weighted_normalizers,
)
from .axioms import AXIOMS, check_axiom, check_field_comparability, check_null_author, demonstrate_impossibility, find_violation
from .counting import canonical_reduction, citation_multiset, euclidean_index, h_index, registry
from .formats import emit_database, parse_database
from .generators import fixture, generate_random_db
from .model import Database, DatabaseError, DomainError, field_components, validate_domain
from .paper_influence import InfluenceParams, direct_influence_matrix, exerted_totals, pi_delta_pair

__version__ = "0.1.0"

__all__ = [
    "AXIOMS",
    "AuthorInfluenceResult",
    "Database",
    "DatabaseError",
    "DomainError",
    "InfluenceParams",
    "WeightScheme",
    "alpha_from_activity",
    "author_influence_matrix",
    "bilateral_author_influence",
    "canonical_reduction",
    "check_axiom",
    "check_field_comparability",
    "check_null_author",
    "citation_multiset",
    "concave_index",
    "demonstrate_impossibility",
    "direct_influence_matrix",
    "emit_database",
    "euclidean_index",
    "exerted_totals",
    "field_components",
    "find_violation",
    "fixture",
    "generate_random_db",
    "h_index",
    "influence_index",
    "normalizer_p_prime",
    "parse_database",
    "pi_delta_pair",
    "registry",
    "validate_domain",
    "weighted_normalizers",
]
