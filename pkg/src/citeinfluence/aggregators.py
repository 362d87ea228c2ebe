"""Property checks for aggregation functions.

Two families are covered: the finite sum ``lam * sum(s)`` over a finite
index set and the discounted sum ``lam * sum_k delta^(k-1) s_k`` over the
positive integers.  Infinite sequences are finite prefixes followed by
zeros, so both aggregates are evaluated exactly (no truncation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

Kind = Literal["finite-sum", "discounted-sum"]
REL_TOL = 1e-12
LONG_RUN_EPS = (1e-2, 1e-4, 1e-6)


@dataclass(frozen=True)
class AggregatorSample:
    """Values in [0, 1]; ``infinite`` sequences continue with zeros."""

    values: tuple[float, ...]
    infinite: bool = True

    def __post_init__(self) -> None:
        if any(not 0.0 <= v <= 1.0 for v in self.values):
            raise ValueError("sample values must lie in [0, 1]")

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(max(n, len(self.values)))
        out[: len(self.values)] = self.values
        return out


@dataclass
class PropertyResult:
    holds: bool | None  # None: property does not apply to this family
    checked: int = 0
    max_error: float = 0.0
    witnesses: dict = field(default_factory=dict)


def finite_sum(lam: float) -> Callable[[Sequence[float]], float]:
    return lambda s: lam * math.fsum(s)


def discounted_sum(lam: float, delta: float) -> Callable[[Sequence[float]], float]:
    return lambda s: lam * math.fsum(delta**k * v for k, v in enumerate(s))


def long_run_horizon(lam: float, delta: float, eps: float) -> int:
    """Smallest K with ``lam * delta^K / (1 - delta) <= eps``: cutting after K costs at most eps."""
    if delta == 0.0 or lam == 0.0:
        return 1
    k = 1
    while lam * delta**k / (1.0 - delta) > eps:
        k += 1
    return k


def random_samples(n: int, max_len: int = 12, seed: int = 0, infinite: bool = True) -> list[AggregatorSample]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        length = int(rng.integers(1, max_len + 1))
        vals = rng.random(length)
        # sprinkle exact zeros and ones, the boundary of the domain
        vals[rng.random(length) < 0.1] = 0.0
        vals[rng.random(length) < 0.1] = 1.0
        out.append(AggregatorSample(tuple(vals.tolist()), infinite))
    return out


def _close(x: float, y: float) -> tuple[bool, float]:
    err = abs(x - y)
    return err <= REL_TOL * max(1.0, abs(x), abs(y)), err


def check_aggregator_properties(
    kind: Kind,
    samples: Sequence[AggregatorSample],
    lam: float = 1.0,
    delta: float = 0.5,
    seed: int = 0,
) -> dict[str, PropertyResult]:
    """Check the six aggregation properties on consecutive pairs of ``samples``.

    Equalities are tested to a relative tolerance of 1e-12.  Long Run is
    checked constructively: for every sample and every epsilon in
    ``LONG_RUN_EPS`` the cut-off sequence ``z = (1, ..., 1, 0, ...)`` of
    length :func:`long_run_horizon` must achieve ``f(s z) >= f(s) - eps``.
    """
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if kind == "discounted-sum":
        if not 0.0 <= delta < 1.0:
            raise ValueError("delta must lie in [0, 1)")
        f = discounted_sum(lam, delta)
    elif kind == "finite-sum":
        f = finite_sum(lam)
    else:
        raise ValueError(f"unknown aggregator kind {kind!r}")
    if len(samples) < 2:
        raise ValueError("need at least two samples")

    rng = np.random.default_rng(seed)
    names = ("monotonicity", "homogeneity", "independence", "symmetry", "recursivity", "long-run")
    res = {n: PropertyResult(True) for n in names}
    if kind == "discounted-sum":
        res["symmetry"] = PropertyResult(None)
    else:
        res["recursivity"] = PropertyResult(None)
        res["long-run"] = PropertyResult(None)

    def record(name: str, ok: bool, err: float) -> None:
        r = res[name]
        r.checked += 1
        r.max_error = max(r.max_error, err)
        if not ok:
            r.holds = False

    for i, a in enumerate(samples):
        b = samples[(i + 1) % len(samples)]
        n = max(len(a.values), len(b.values))
        # finite case: one common index set per pair
        s, s2 = a.padded(n), b.padded(n)
        fs, fs2 = f(s), f(s2)

        upper = np.maximum(s, s2)
        fu = f(upper)
        record("monotonicity", fu >= fs - REL_TOL * max(1.0, abs(fs)), max(0.0, fs - fu))

        t = float(rng.random())
        ok, err = _close(f(t * s), t * fs)
        record("homogeneity", ok, err)

        mask = rng.random(n) < 0.5
        mix = lambda j_part, k_part: np.where(mask, j_part, k_part)  # noqa: E731
        lhs = f(mix(s, s)) - f(mix(s, s2))
        rhs = f(mix(s2, s)) - f(mix(s2, s2))
        ok, err = _close(lhs, rhs)
        record("independence", ok, err)

        if kind == "finite-sum":
            ok, err = _close(f(rng.permutation(s)), fs)
            record("symmetry", ok, err)
            continue

        shift = lambda x: np.concatenate(([0.0], x))  # noqa: E731
        ok, err = _close(fs2 * f(shift(s)), fs * f(shift(s2)))
        record("recursivity", ok, err)

        for eps in LONG_RUN_EPS:
            k = long_run_horizon(lam, delta, eps)
            z = np.zeros(len(s))
            z[:k] = 1.0
            fz = f(s * z)
            record("long-run", fz >= fs - eps, max(0.0, fs - eps - fz))
            res["long-run"].witnesses[eps] = k
    return res
