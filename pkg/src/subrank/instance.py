"""Problem data model: instances, orderings, cover times and costs."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    ElementInSet,
    InfeasibleCover,
    NegativeWeight,
    NonPositiveThreshold,
    NotAPermutation,
    NotNormalized,
)
from .valuations import CoverageValuation, ExplicitValuation, ModularValuation, Valuation

DEFAULT_TOLERANCE = 1e-9
TOLERANCE_ENV = "SUBRANK_TOLERANCE"

PRODUCERS = ("aru", "greedy", "brute-force", "external")


def default_tolerance() -> float:
    """Comparison slack for the unit threshold, overridable via SUBRANK_TOLERANCE."""
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOLERANCE
    tol = float(raw)
    if not (0 <= tol < 1):
        raise ValueError(f"{TOLERANCE_ENV} must lie in [0, 1), got {raw!r}")
    return tol


@dataclass(frozen=True)
class Instance:
    m: int
    weights: tuple[float, ...]
    valuations: tuple[Valuation, ...]
    tol: float = DEFAULT_TOLERANCE

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def threshold(self) -> float:
        return 1.0 - self.tol


@dataclass(frozen=True)
class LinearOrdering:
    """order[t] is the 1-based element scheduled at step t+1."""

    order: tuple[int, ...]
    producer: str = "external"

    def __post_init__(self):
        order = tuple(int(x) for x in self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise NotAPermutation(f"{order} is not a permutation of 1..{len(order)}")
        if self.producer not in PRODUCERS:
            raise ValueError(f"unknown producer {self.producer!r}")

    def __len__(self):
        return len(self.order)


@dataclass(frozen=True)
class CoverReport:
    cover_times: tuple[int, ...]
    total_cost: float


def validate_instance(
    m: int,
    weights: Sequence[float],
    valuations: Sequence[Valuation],
    tol: float | None = None,
) -> Instance:
    if tol is None:
        tol = default_tolerance()
    if m < 1:
        raise DimensionMismatch(f"ground set must be non-empty, got m={m}")
    if len(weights) < 1:
        raise DimensionMismatch("at least one function is required")
    if len(weights) != len(valuations):
        raise DimensionMismatch(f"{len(weights)} weights for {len(valuations)} functions")
    w = tuple(float(x) for x in weights)
    if any(not math.isfinite(x) or x < 0 for x in w):
        raise NegativeWeight(f"weights must be finite and non-negative: {w}")
    if not any(x > 0 for x in w):
        raise NegativeWeight("at least one weight must be positive")
    for i, f in enumerate(valuations, start=1):
        if f.m != m:
            raise DimensionMismatch(f"function {i} is defined over {f.m} elements, instance has {m}")
        empty = f.value(())
        if empty != 0.0:
            raise NotNormalized(f"function {i} has f(empty) = {empty}")
        if not isinstance(f, (ModularValuation, CoverageValuation, ExplicitValuation)):
            # spot check for custom oracles; families are monotone by construction
            singles = [f.value([j]) for j in range(1, m + 1)]
            if min(singles) < 0:
                raise NotNormalized(f"function {i} takes a negative value")
        full = f.full_value()
        if full < 1.0 - tol:
            raise InfeasibleCover(f"function {i} reaches only {full} < 1 on the full ground set")
    return Instance(m=m, weights=w, valuations=tuple(valuations), tol=float(tol))


def normalize_thresholds(functions: Sequence[Valuation], lambdas: Sequence[float]) -> list[Valuation]:
    """Rescale each f^i by its threshold so that every threshold becomes 1."""
    if len(functions) != len(lambdas):
        raise DimensionMismatch(f"{len(lambdas)} thresholds for {len(functions)} functions")
    out = []
    for f, lam in zip(functions, lambdas):
        lam = float(lam)
        if not lam > 0 or not math.isfinite(lam):
            raise NonPositiveThreshold(f"threshold must be positive, got {lam}")
        out.append(f if lam == 1.0 else f.scaled(lam))
    return out


def marginal(f: Valuation, S: Iterable[int], j: int) -> float:
    S = frozenset(int(x) for x in S)
    if j in S:
        raise ElementInSet(f"element {j} already in S")
    return f.value(S | {j}) - f.value(S)


def _as_ordering(ordering) -> LinearOrdering:
    if isinstance(ordering, LinearOrdering):
        return ordering
    return LinearOrdering(tuple(ordering))


def prefix_values(instance: Instance, ordering) -> list[list[float]]:
    """f^i(S_t) for t = 0..m along the ordering, one list per function."""
    ordering = _as_ordering(ordering)
    if len(ordering) != instance.m:
        raise NotAPermutation(f"ordering has {len(ordering)} elements, instance has {instance.m}")
    out = []
    for f in instance.valuations:
        ev = f.evaluator()
        row = [ev.value]
        for j in ordering.order:
            ev.add(j - 1)
            row.append(ev.value)
        out.append(row)
    return out


def cover_times_from_prefix(prefix: Sequence[Sequence[float]], threshold: float) -> tuple[int, ...]:
    times = []
    for i, row in enumerate(prefix, start=1):
        c = next((t for t in range(1, len(row)) if row[t] >= threshold), None)
        if c is None:
            raise InfeasibleCover(f"function {i} is never covered by the ordering")
        times.append(c)
    return tuple(times)


def weighted_cost(weights: Sequence[float], times: Sequence[int]) -> float:
    total = 0.0
    for w, c in zip(weights, times):
        total += w * c
    return total


def cover_times(instance: Instance, ordering) -> CoverReport:
    ordering = _as_ordering(ordering)
    if len(ordering) != instance.m:
        raise NotAPermutation(f"ordering has {len(ordering)} elements, instance has {instance.m}")
    thr = instance.threshold
    times = []
    for i, f in enumerate(instance.valuations, start=1):
        ev = f.evaluator()
        c = None
        for t, j in enumerate(ordering.order, start=1):
            ev.add(j - 1)
            if ev.value >= thr:
                c = t
                break
        if c is None:
            raise InfeasibleCover(f"function {i} is never covered by the ordering")
        times.append(c)
    return CoverReport(tuple(times), weighted_cost(instance.weights, times))
