"""Paper-to-paper influence: direct, order-k and discounted.

The direct-influence operator ``M`` has ``M[p, q] = 1 / R_q`` when ``q``
cites ``p``.  Column ``q`` distributes the unit debt of ``q`` over its
references; reference-less papers give empty columns, so mass leaks out of
the system instead of being teleported.

The discounted influence is

    PI_delta = (1 - delta) * sum_{k >= 1} delta^(k-1) M^k

and is never materialized on the sparse path.  Whole vectors are obtained
from truncated geometric series of matrix-vector products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .model import Database

DENSE_LIMIT = 2000


@dataclass(frozen=True)
class InfluenceParams:
    delta: float = 0.5
    tolerance: float = 1e-10
    max_order: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_order is not None and self.max_order < 1:
            raise ValueError("max_order must be at least 1")

    @property
    def order(self) -> int:
        """Truncation order K; the neglected column mass is at most delta^K."""
        if self.delta == 0.0:
            return 1
        k = max(1, math.ceil(math.log(self.tolerance) / math.log(self.delta)))
        return k if self.max_order is None else min(k, self.max_order)

    @property
    def tail_bound(self) -> float:
        return self.delta**self.order


@dataclass(frozen=True)
class CitationMatrix:
    """Column-normalized direct influence over ``papers`` (CSC storage)."""

    matrix: sp.csc_matrix
    papers: list[str]
    index: dict[str, int]

    @property
    def T(self) -> sp.csr_matrix:
        return self.matrix.T.tocsr()

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def __getitem__(self, pq: tuple[str, str]) -> float:
        p, q = pq
        return float(self.matrix[self.index[p], self.index[q]])


def direct_influence_matrix(d: Database) -> CitationMatrix:
    ix = d.indexed
    n = len(ix.papers)
    n_refs = np.bincount(ix.citing, minlength=n).astype(float)
    vals = 1.0 / n_refs[ix.citing] if len(ix.citing) else np.empty(0)
    m = sp.csc_matrix((vals, (ix.cited, ix.citing)), shape=(n, n))
    m.sort_indices()
    return CitationMatrix(m, ix.papers, ix.paper_pos)


def _matrix(d: Database | CitationMatrix) -> CitationMatrix:
    return d if isinstance(d, CitationMatrix) else direct_influence_matrix(d)


def influence_order_k(m: CitationMatrix, k: int, p: str, q: str) -> float:
    """``(M^k)[p, q]`` by ``k`` successive pulls starting from column ``q``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    v = np.zeros(len(m.papers))
    v[m.index[q]] = 1.0
    for _ in range(k):
        v = m.matrix @ v
        if not v.any():
            return 0.0
    return float(v[m.index[p]])


def discounted_series(
    op: sp.spmatrix, seed: np.ndarray, params: InfluenceParams, norm: str = "l1", early_stop: bool = True
) -> np.ndarray:
    """``(1 - delta) * sum_{k=1..K} delta^(k-1) op^k seed``.

    ``seed`` may be a vector or a 2-d block of column vectors.  Iteration
    stops at the truncation order K, or earlier once the bound on the
    remaining tail, ``delta^k * |op^k seed|``, drops below
    ``tolerance * |seed|``.  Use ``norm="l1"`` when ``op`` has column sums at
    most one and ``norm="max"`` when it has row sums at most one.

    ``early_stop=False`` always runs to order K (or until the iterate is
    exactly zero), so two series over the same operator are truncated
    identically.
    """
    delta = params.delta
    measure = (lambda x: np.abs(x).sum(axis=0).max()) if norm == "l1" else (lambda x: np.abs(x).max())
    u = op @ seed
    acc = u.copy()
    scale = measure(seed) if seed.size else 0.0
    if scale == 0.0:
        return acc * (1.0 - delta)
    weight = 1.0
    for k in range(1, params.order):
        weight *= delta
        if early_stop and weight * measure(u) <= params.tolerance * scale:
            break
        u = op @ u
        if not u.any():
            break
        acc += weight * u
    return (1.0 - delta) * acc


def pi_delta_pair(d: Database | CitationMatrix, params: InfluenceParams, p: str, q: str) -> float:
    m = _matrix(d)
    seed = np.zeros(len(m.papers))
    seed[m.index[q]] = 1.0
    return float(discounted_series(m.matrix, seed, params)[m.index[p]])


def pi_delta_column(d: Database | CitationMatrix, params: InfluenceParams, q: str) -> dict[str, float]:
    """All nonzero ``PI_delta(p, q)`` for a fixed influenced paper ``q``."""
    m = _matrix(d)
    seed = np.zeros(len(m.papers))
    seed[m.index[q]] = 1.0
    col = discounted_series(m.matrix, seed, params)
    return {m.papers[i]: float(col[i]) for i in np.flatnonzero(col)}


def exerted_totals_vector(m: CitationMatrix, params: InfluenceParams, early_stop: bool = True) -> np.ndarray:
    # row sums of M^T are column sums of M, hence at most one: max-norm tail
    return discounted_series(m.matrix.T.tocsr(), np.ones(len(m.papers)), params, norm="max", early_stop=early_stop)


def exerted_totals(d: Database | CitationMatrix, params: InfluenceParams) -> dict[str, float]:
    """Total influence received by each paper, ``sum_p PI_delta(p, q)``."""
    m = _matrix(d)
    return dict(zip(m.papers, exerted_totals_vector(m, params).tolist()))


def dense_oracle_pi(d: Database, delta: float, order: int) -> tuple[list[str], np.ndarray]:
    """Explicit ``(1 - delta) * sum_{k=1..order} delta^(k-1) M^k`` by dense products.

    Built directly from the edge list with its own normalization so it
    shares no code with the sparse path.
    """
    papers = sorted(d.papers)
    n = len(papers)
    if n > DENSE_LIMIT:
        raise ValueError(f"dense oracle limited to {DENSE_LIMIT} papers, got {n}")
    pos = {p: i for i, p in enumerate(papers)}
    adj = np.zeros((n, n))
    for cited, citing in d.edges:
        adj[pos[cited], pos[citing]] = 1.0
    r = adj.sum(axis=0)
    m = np.divide(adj, r, out=np.zeros_like(adj), where=r > 0)
    power = np.eye(n)
    total = np.zeros((n, n))
    for k in range(1, order + 1):
        power = power @ m
        total += delta ** (k - 1) * power
    return papers, (1.0 - delta) * total
