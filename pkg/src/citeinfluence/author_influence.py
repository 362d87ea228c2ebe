"""Author-level influence built on top of paper-level discounted influence.

Everything here is computed with vector fixpoints over the citation matrix,
all truncated at the same order so that the totals identity is exact up to
rounding.  With ``c(q) = sum_b alpha_b * w_q^b / N_b`` (``N`` the mode's normalizer,
``w`` the contribution shares) the index is

    I(a) = sum_p w_p^a * (PI_delta @ c)(p)

so one backward pass (for the normalizers) and one forward pass give every
author's score without forming the author-by-author matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Mapping

import numpy as np
import scipy.sparse as sp

from .model import Database, DatabaseError, erase_self_only_authors, require_domain
from .paper_influence import (
    CitationMatrix,
    InfluenceParams,
    direct_influence_matrix,
    discounted_series,
    exerted_totals_vector,
)

Mode = Literal["base", "weighted", "noself"]
MODES = ("base", "weighted", "noself")
SHARE_TOL = 1e-9
FULL_AI_LIMIT = 5000


class NormalizerError(DatabaseError):
    """Some author receives no influence at all, so that author's debt cannot be normalized."""


@dataclass(frozen=True)
class WeightScheme:
    """Contribution shares per paper and debt weights per author.

    ``shares`` maps a paper to ``{author: share}``; papers not listed give
    their whole share to their owner.  ``alpha`` defaults to one for every
    author.
    """

    shares: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    alpha: Mapping[str, float] = field(default_factory=dict)
    concave_exponent: float | None = None

    def validate(self, d: Database) -> None:
        known = set(d.portfolio)
        for p, dist in self.shares.items():
            if p not in d._owner:
                raise DatabaseError(f"shares given for unknown paper {p!r}")
            total = sum(dist.values())
            if abs(total - 1.0) > SHARE_TOL:
                raise DatabaseError(f"shares of paper {p!r}: shares sum {total:g} ≠ 1")
            for a, w in dist.items():
                if a not in known:
                    raise DatabaseError(f"paper {p!r} has a share for unknown author {a!r}")
                if w < 0:
                    raise DatabaseError(f"negative share {w} of {a!r} on {p!r}")
        for a, w in self.alpha.items():
            if w < 0:
                raise DatabaseError(f"negative author weight {w} for {a!r}")
        if self.concave_exponent is not None and not 0.0 <= self.concave_exponent <= 1.0:
            raise DatabaseError("concave exponent must lie in [0, 1]")

    def share_matrix(self, d: Database) -> sp.csr_matrix:
        """Papers x authors matrix of shares, in the database's index order."""
        ix = d.indexed
        rows, cols, vals = [], [], []
        for i, p in enumerate(ix.papers):
            dist = self.shares.get(p)
            if dist is None:
                rows.append(i)
                cols.append(int(ix.owner[i]))
                vals.append(1.0)
            else:
                for a, w in dist.items():
                    if w:
                        rows.append(i)
                        cols.append(ix.author_pos[a])
                        vals.append(float(w))
        return sp.csr_matrix((vals, (rows, cols)), shape=(len(ix.papers), len(ix.authors)))

    def alpha_vector(self, d: Database) -> np.ndarray:
        return np.array([float(self.alpha.get(a, 1.0)) for a in d.authors])

    def restricted(self, d: Database) -> "WeightScheme":
        """Drop entries for papers and authors no longer in ``d``."""
        shares = {p: s for p, s in self.shares.items() if p in d._owner}
        alpha = {a: w for a, w in self.alpha.items() if a in d.portfolio}
        return WeightScheme(shares, alpha, self.concave_exponent)


def alpha_from_activity(activity: Mapping[str, float], authors: list[str]) -> dict[str, float]:
    """Author debt weights taken from per-author activity counts."""
    missing = [a for a in authors if a not in activity]
    if missing:
        raise DatabaseError(f"no activity count for authors: {', '.join(missing)}")
    return {a: float(activity[a]) for a in authors}


@dataclass(frozen=True)
class AuthorInfluenceResult:
    per_author: dict[str, float]
    normalizers: dict[str, float]
    mode: str
    params: InfluenceParams
    erased: tuple[str, ...] = ()

    @property
    def total(self) -> float:
        return float(sum(self.per_author.values()))

    @property
    def reported_tolerance(self) -> float:
        """Bound on ``|sum I - A|`` from truncation (per-paper tails summed)."""
        return self.params.tolerance * max(1, len(self.per_author))


def _self_influence(m: CitationMatrix, shares: sp.csr_matrix, params: InfluenceParams, block: int = 64) -> np.ndarray:
    """``sum_{p,q} w_p^b w_q^b PI(p, q)`` for every author ``b``."""
    n_auth = shares.shape[1]
    out = np.empty(n_auth)
    cols = shares.tocsc()
    for start in range(0, n_auth, block):
        stop = min(start + block, n_auth)
        seed = cols[:, start:stop].toarray()
        y = discounted_series(m.matrix, seed, params, early_stop=False)
        out[start:stop] = np.einsum("ij,ij->j", seed, y)
    return out


def _prepare(d: Database, params: InfluenceParams, weights: WeightScheme | None, mode: str, check_domain: bool):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    weights = weights or WeightScheme()
    erased: list[str] = []
    if mode == "noself":
        d, erased = erase_self_only_authors(d)
        weights = weights.restricted(d)
    elif mode == "base" and check_domain:
        require_domain(d)
    if mode == "base":
        weights = WeightScheme(alpha=weights.alpha)
    weights.validate(d)
    return d, weights, erased


def _normalizers(d, m, params, shares, mode, self_infl=None, strict=True):
    sigma = exerted_totals_vector(m, params, early_stop=False)
    norm = shares.T @ sigma
    if mode == "noself":
        norm = norm - self_infl
    if not strict:
        return norm
    bad = [a for a, v in zip(d.authors, norm) if not v > 0]
    if bad:
        raise NormalizerError(f"zero normalizer (no influence received) for authors: {', '.join(bad[:10])}")
    return norm


def normalizer_p_prime(d: Database, params: InfluenceParams) -> dict[str, float]:
    """``P'_b``: total influence received by ``b``'s papers.

    No domain check is made, so databases outside the domain can be
    inspected; authors receiving nothing get zero.
    """
    m = direct_influence_matrix(d)
    shares = WeightScheme().share_matrix(d)
    return dict(zip(d.authors, _normalizers(d, m, params, shares, "base", strict=False).tolist()))


def weighted_normalizers(
    d: Database, params: InfluenceParams, weights: WeightScheme, mode: Mode = "weighted"
) -> dict[str, float]:
    """``P''`` (mode ``weighted``) or ``P'''`` (mode ``noself``) for every author.

    Unlike :func:`influence_index`, the ``noself`` variant does not erase
    authors first; call :func:`erase_self_only_authors` beforehand if needed.
    """
    if mode not in ("weighted", "noself"):
        raise ValueError("mode must be 'weighted' or 'noself'")
    weights.validate(d)
    m = direct_influence_matrix(d)
    shares = weights.share_matrix(d)
    self_infl = _self_influence(m, shares, params) if mode == "noself" else None
    return dict(zip(d.authors, _normalizers(d, m, params, shares, mode, self_infl).tolist()))


def bilateral_author_influence(d: Database, params: InfluenceParams, a: str, b: str) -> float:
    """``AI(a, b)``: share of ``b``'s debt owed to ``a`` (single-authored papers)."""
    m = direct_influence_matrix(d)
    ix = d.indexed
    seed = (ix.owner == ix.author_pos[b]).astype(float)
    y = discounted_series(m.matrix, seed, params, early_stop=False)
    p_prime = y.sum()
    if not p_prime > 0:
        raise NormalizerError(f"author {b!r} receives no influence")
    return float(y[ix.owner == ix.author_pos[a]].sum() / p_prime)


def influence_index(
    d: Database,
    params: InfluenceParams | None = None,
    weights: WeightScheme | None = None,
    mode: Mode = "base",
    check_domain: bool = True,
) -> AuthorInfluenceResult:
    """Discounted influence index of every author.

    ``base`` uses single authorship and requires a database in the domain
    (unless ``check_domain=False``).  ``weighted`` applies contribution
    shares.  ``noself`` first erases authors who cite only themselves, then
    spreads each author's debt over other authors only.
    """
    params = params or InfluenceParams()
    d, weights, erased = _prepare(d, params, weights, mode, check_domain)
    m = direct_influence_matrix(d)
    shares = weights.share_matrix(d)
    alpha = weights.alpha_vector(d)

    self_infl = _self_influence(m, shares, params) if mode == "noself" else None
    norm = _normalizers(d, m, params, shares, mode, self_infl)

    c = shares @ (alpha / norm)
    y = discounted_series(m.matrix, c, params, early_stop=False)
    scores = shares.T @ y
    if mode == "noself":
        scores = scores - alpha * self_infl / norm
    return AuthorInfluenceResult(
        dict(zip(d.authors, scores.tolist())),
        dict(zip(d.authors, norm.tolist())),
        mode,
        params,
        tuple(erased),
    )


def author_influence_matrix(
    d: Database,
    params: InfluenceParams | None = None,
    weights: WeightScheme | None = None,
    mode: Mode = "base",
    check_domain: bool = True,
) -> tuple[list[str], np.ndarray]:
    """Full ``AI[a, b]`` matrix (rows exert, columns receive); opt-in and size-guarded."""
    params = params or InfluenceParams()
    d, weights, _ = _prepare(d, params, weights, mode, check_domain)
    if d.n_authors > FULL_AI_LIMIT:
        raise ValueError(f"full author matrix limited to {FULL_AI_LIMIT} authors, got {d.n_authors}")
    m = direct_influence_matrix(d)
    shares = weights.share_matrix(d)
    y = discounted_series(m.matrix, shares.toarray(), params, early_stop=False)
    raw = np.asarray(shares.T @ y)
    if mode == "noself":
        np.fill_diagonal(raw, 0.0)
    norm = raw.sum(axis=0)
    if not (norm > 0).all():
        raise NormalizerError("some author receives no influence")
    return d.authors, raw / norm


def concave_index(d: Database, params: InfluenceParams | None, exponent: float) -> dict[str, float]:
    """Alternative index ``sum_b AI(a,b)^e / sum_c AI(c,b)^e`` with ``0 <= e <= 1``.

    With ``e = 0`` every author with nonzero influence on ``b`` gets an equal
    share of ``b``'s unit, i.e. ``0^0`` counts as zero.
    """
    if not 0.0 <= exponent <= 1.0:
        raise ValueError("exponent must lie in [0, 1]")
    authors, ai = author_influence_matrix(d, params)
    powered = np.where(ai > 0, np.power(ai, exponent, where=ai > 0, out=np.zeros_like(ai)), 0.0)
    shares = powered / powered.sum(axis=0)
    return dict(zip(authors, shares.sum(axis=1).tolist()))
