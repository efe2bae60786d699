"""Submodular valuation oracles and property checkers.

Public methods take element sets as iterables of 1-based element labels
(``{1, 2}`` means the first two elements). Evaluators, used by the solvers,
work with 0-based column indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllMarginalsZero,
    BadUniverseRef,
    NegativeValue,
    NonPositiveNormalizer,
    NonPositiveThreshold,
    NotMonotone,
    NotNormalized,
    NotSubmodular,
    TooLarge,
    TooLargeForExhaustive,
)

MAX_EXPLICIT_M = 16
MAX_UNIVERSE = 10**6


def _to_indices(S: Iterable[int], m: int) -> list[int]:
    out = []
    for j in S:
        j = int(j)
        if not 1 <= j <= m:
            raise ValueError(f"element {j} outside ground set 1..{m}")
        out.append(j - 1)
    return out


class Valuation:
    """A set function over the ground set 1..m, accessed through value queries."""

    m: int
    kind = "generic"

    def value(self, S: Iterable[int]) -> float:
        raise NotImplementedError

    def evaluator(self) -> "Evaluator":
        return _GenericEvaluator(self)

    def epsilon_lower_bound(self) -> float:
        # falls back to enumeration for small custom oracles
        if self.m > MAX_EXPLICIT_M:
            raise TooLarge(f"no epsilon bound for generic oracle with m={self.m} > {MAX_EXPLICIT_M}")
        return _table_epsilon(value_table(self))

    def scaled(self, lam: float) -> "Valuation":
        return ScaledValuation(self, lam)

    def full_value(self) -> float:
        return self.value(range(1, self.m + 1))


class Evaluator:
    """Incremental state for f over a growing prefix S.

    ``value`` is f(S); ``marginals()`` returns f(S + j) - f(S) for every column j
    (entries for already selected columns are meaningless); ``add(j)`` extends S.
    """

    value: float

    def marginals(self) -> np.ndarray:
        raise NotImplementedError

    def add(self, j: int) -> None:
        raise NotImplementedError


class _GenericEvaluator(Evaluator):
    def __init__(self, valuation: Valuation):
        self._f = valuation
        self._S: list[int] = []
        self.value = valuation.value(())

    def marginals(self):
        m = self._f.m
        chosen = set(self._S)
        out = np.zeros(m)
        base = [j + 1 for j in self._S]
        for j in range(m):
            if j not in chosen:
                out[j] = self._f.value(base + [j + 1]) - self.value
        return out

    def add(self, j):
        self._S.append(j)
        self.value = self._f.value([k + 1 for k in self._S])


class ModularValuation(Valuation):
    kind = "modular"

    def __init__(self, values: Sequence[float]):
        v = np.asarray(values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise NegativeValue("modular values must be finite")
        if np.any(v < 0):
            raise NegativeValue(f"modular values must be non-negative, got {v.min()}")
        v.flags.writeable = False
        self.values = v
        self.m = v.size

    def value(self, S):
        total = 0.0
        for j in sorted(_to_indices(S, self.m)):
            total += self.values[j]
        return float(total)

    def evaluator(self):
        return _ModularEvaluator(self.values)

    def epsilon_lower_bound(self):
        pos = self.values[self.values > 0]
        if pos.size == 0:
            raise AllMarginalsZero("modular function has no positive value")
        return float(pos.min())

    def scaled(self, lam):
        return ModularValuation(self.values / lam)

    def __repr__(self):
        return f"ModularValuation({self.values.tolist()!r})"


class _ModularEvaluator(Evaluator):
    def __init__(self, v):
        self._v = v
        self.value = 0.0

    def marginals(self):
        return self._v

    def add(self, j):
        self.value += float(self._v[j])


class CoverageValuation(Valuation):
    """f(T) = weight of the union of the items covered by the elements of T, over a normalizer.

    ``element_sets[j-1]`` holds the 1-based universe items covered by element j.
    """

    kind = "coverage"

    def __init__(self, element_sets, item_weights=None, normalizer=None, universe_size=None):
        sets = [frozenset(int(x) for x in s) for s in element_sets]
        if universe_size is None:
            universe_size = len(item_weights) if item_weights is not None else max((max(s) for s in sets if s), default=0)
        N = int(universe_size)
        if N < 1:
            raise BadUniverseRef("universe must contain at least one item")
        if N > MAX_UNIVERSE:
            raise TooLarge(f"universe of {N} items exceeds cap {MAX_UNIVERSE}")
        if item_weights is None:
            w = np.ones(N)
        else:
            w = np.asarray(item_weights, dtype=float).reshape(-1)
        if w.size != N:
            raise BadUniverseRef(f"{w.size} item weights for a universe of {N} items")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise NegativeValue("item weights must be finite and positive")
        for j, s in enumerate(sets):
            bad = [x for x in s if not 1 <= x <= N]
            if bad:
                raise BadUniverseRef(f"element {j + 1} references item {bad[0]} outside 1..{N}")
        if normalizer is None:
            normalizer = float(N)
        normalizer = float(normalizer)
        if not np.isfinite(normalizer) or normalizer <= 0:
            raise NonPositiveNormalizer(f"normalizer must be positive, got {normalizer}")

        self.element_sets = tuple(sets)
        self.m = len(sets)
        self.universe_size = N
        w.flags.writeable = False
        self.item_weights = w
        self.normalizer = normalizer

        # element -> items (CSR) and item -> elements (CSC), both 0-based
        sizes = np.array([len(s) for s in sets], dtype=np.int64)
        self._e_ptr = np.concatenate(([0], np.cumsum(sizes)))
        items = np.fromiter((x - 1 for s in sets for x in sorted(s)), dtype=np.int64, count=int(sizes.sum()))
        self._e_items = items
        owners = np.repeat(np.arange(self.m, dtype=np.int64), sizes)
        order = np.argsort(items, kind="stable")
        self._i_elems = owners[order]
        self._i_ptr = np.concatenate(([0], np.cumsum(np.bincount(items, minlength=N))))
        self._set_weight = np.bincount(owners, weights=w[items], minlength=self.m) if items.size else np.zeros(self.m)
        self._set_size = sizes

    @classmethod
    def _from_arrays(cls, element_sets, w, normalizer):
        return cls(element_sets, w, normalizer, universe_size=w.size)

    def value(self, S):
        idx = _to_indices(S, self.m)
        if not idx:
            return 0.0
        covered = np.zeros(self.universe_size, dtype=bool)
        for j in idx:
            covered[self._e_items[self._e_ptr[j]:self._e_ptr[j + 1]]] = True
        return float(self.item_weights[covered].sum() / self.normalizer)

    def evaluator(self):
        return _CoverageEvaluator(self)

    def epsilon_lower_bound(self):
        used = np.unique(self._e_items)
        if used.size == 0:
            raise AllMarginalsZero("coverage function covers no items")
        return float(self.item_weights[used].min() / self.normalizer)

    def scaled(self, lam):
        return CoverageValuation._from_arrays(self.element_sets, self.item_weights, self.normalizer * lam)

    def __repr__(self):
        return (f"CoverageValuation(m={self.m}, universe_size={self.universe_size}, "
                f"normalizer={self.normalizer})")


class _CoverageEvaluator(Evaluator):
    def __init__(self, f: CoverageValuation):
        self._f = f
        self._covered = np.zeros(f.universe_size, dtype=bool)
        self._unc_weight = f._set_weight.astype(float).copy()
        self._unc_count = f._set_size.copy()
        self._covered_weight = 0.0
        self.value = 0.0

    def marginals(self):
        out = self._unc_weight / self._f.normalizer
        # exact zero once every item of a set is covered; guards against subtraction residue
        out[self._unc_count == 0] = 0.0
        np.maximum(out, 0.0, out=out)
        return out

    def add(self, j):
        f = self._f
        items = f._e_items[f._e_ptr[j]:f._e_ptr[j + 1]]
        new = items[~self._covered[items]]
        if new.size == 0:
            return
        self._covered[new] = True
        w_new = f.item_weights[new]
        self._covered_weight += float(w_new.sum())
        starts = f._i_ptr[new]
        lens = f._i_ptr[new + 1] - starts
        total = int(lens.sum())
        offsets = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(total)
        owners = f._i_elems[offsets]
        self._unc_weight -= np.bincount(owners, weights=np.repeat(w_new, lens), minlength=f.m)
        self._unc_count -= np.bincount(owners, minlength=f.m)
        self.value = self._covered_weight / f.normalizer


class ExplicitValuation(Valuation):
    """Full value table indexed by bitmask (bit k set iff element k+1 is in the set).

    Construction verifies normalization, monotonicity and submodularity exhaustively.
    """

    kind = "explicit"

    def __init__(self, table: Sequence[float], tol: float = 1e-12):
        t = np.asarray(table, dtype=float).reshape(-1)
        size = t.size
        m = size.bit_length() - 1
        if size < 1 or (1 << m) != size:
            raise ValueError(f"table length {size} is not a power of two")
        if m > MAX_EXPLICIT_M:
            raise TooLarge(f"explicit tables are capped at m={MAX_EXPLICIT_M}, got m={m}")
        if not np.all(np.isfinite(t)):
            raise ValueError("table entries must be finite")
        bad = _table_violation(t, m, tol=tol, monotone_tol=0.0)
        if bad is not None:
            kind, S, T, j = bad
            exc = {"normalized": NotNormalized, "monotone": NotMonotone, "submodular": NotSubmodular}[kind]
            raise exc(f"table is not {kind}: S={sorted(S)}, T={sorted(T)}, j={j}")
        t.flags.writeable = False
        self.table = t
        self.m = m

    def value(self, S):
        mask = 0
        for j in _to_indices(S, self.m):
            mask |= 1 << j
        return float(self.table[mask])

    def evaluator(self):
        return _ExplicitEvaluator(self)

    def epsilon_lower_bound(self):
        return _table_epsilon(self.table)

    def scaled(self, lam):
        return ExplicitValuation(self.table / lam)

    def __repr__(self):
        return f"ExplicitValuation(m={self.m})"


class _ExplicitEvaluator(Evaluator):
    def __init__(self, f):
        self._t = f.table
        self._bits = 1 << np.arange(f.m, dtype=np.int64)
        self._mask = 0
        self.value = float(f.table[0])

    def marginals(self):
        return self._t[self._mask | self._bits] - self._t[self._mask]

    def add(self, j):
        self._mask |= 1 << j
        self.value = float(self._t[self._mask])


class ScaledValuation(Valuation):
    """g(S) = f(S) / lam for oracles without a closed-form rescaling."""

    def __init__(self, base: Valuation, lam: float):
        if not lam > 0:
            raise NonPositiveThreshold(f"threshold must be positive, got {lam}")
        self.base = base
        self.lam = float(lam)
        self.m = base.m
        self.kind = base.kind

    def value(self, S):
        return self.base.value(S) / self.lam

    def epsilon_lower_bound(self):
        return self.base.epsilon_lower_bound() / self.lam


def make_modular(v) -> ModularValuation:
    return ModularValuation(v)


def make_coverage(element_sets, item_weights=None, normalizer=None, universe_size=None) -> CoverageValuation:
    return CoverageValuation(element_sets, item_weights, normalizer, universe_size)


def make_explicit(table) -> ExplicitValuation:
    return ExplicitValuation(table)


# ---------------------------------------------------------------------------
# property checking


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of a property check; on failure ``violated`` names the property and
    (S, T, j) is the witness with 1-based labels. For ``monotone`` failures f(T) < f(S)
    with S a subset of T; for ``submodular`` failures f_S(j) < f_T(j)."""

    ok: bool
    checked: int
    violated: str | None = None
    S: frozenset = frozenset()
    T: frozenset = frozenset()
    j: int | None = None


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


def value_table(f: Valuation) -> np.ndarray:
    """All 2^m values of f in bitmask order."""
    m = f.m
    if m > MAX_EXPLICIT_M:
        raise TooLargeForExhaustive(f"m={m} too large for a full value table")
    if isinstance(f, ExplicitValuation):
        return np.array(f.table)
    masks = np.arange(1 << m, dtype=np.int64)
    if isinstance(f, ModularValuation):
        bits = (masks[:, None] >> np.arange(m)) & 1
        return bits.astype(float) @ f.values if m else np.zeros(1)
    out = np.empty(1 << m)
    for mask in range(1 << m):
        out[mask] = f.value([k + 1 for k in range(m) if mask >> k & 1])
    return out


def _table_violation(t: np.ndarray, m: int, tol: float, monotone_tol: float | None = None):
    """First violation as (kind, S, T, j) or None. Submodular witnesses are the smallest
    (S mask, added element k, tested element j) with T = S + {k}."""
    if monotone_tol is None:
        monotone_tol = tol
    if t[0] != 0.0:
        return ("normalized", frozenset(), frozenset(), None)
    masks = np.arange(1 << m, dtype=np.int64)
    best = None
    for j in range(m):
        base = masks[(masks >> j & 1) == 0]
        drop = t[base | (1 << j)] < t[base] - monotone_tol
        if drop.any():
            S = int(base[np.argmax(drop)])
            cand = (S, j)
            if best is None or cand < best:
                best = cand
    if best is not None:
        S, j = best
        return ("monotone", _mask_to_set(S), _mask_to_set(S | 1 << j), j + 1)
    best = None
    for k in range(m):
        for j in range(m):
            if j == k:
                continue
            base = masks[((masks >> j & 1) == 0) & ((masks >> k & 1) == 0)]
            bj, bk = 1 << j, 1 << k
            gain_small = t[base | bj] - t[base]
            gain_big = t[base | bk | bj] - t[base | bk]
            bad = gain_small < gain_big - tol
            if bad.any():
                cand = (int(base[np.argmax(bad)]), k, j)
                if best is None or cand < best:
                    best = cand
    if best is not None:
        S, k, j = best
        return ("submodular", _mask_to_set(S), _mask_to_set(S | 1 << k), j + 1)
    return None


def _table_epsilon(t: np.ndarray) -> float:
    m = t.size.bit_length() - 1
    masks = np.arange(t.size, dtype=np.int64)
    smallest = np.inf
    for j in range(m):
        base = masks[(masks >> j & 1) == 0]
        gains = t[base | (1 << j)] - t[base]
        gains = gains[gains > 0]
        if gains.size:
            smallest = min(smallest, float(gains.min()))
    if not np.isfinite(smallest):
        raise AllMarginalsZero("every marginal of the function is zero")
    return smallest


def check_submodular_monotone_normalized(
    f: Valuation,
    mode: str = "exhaustive",
    k: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
) -> PropertyVerdict:
    """Check normalization, monotonicity and decreasing marginals.

    ``exhaustive`` covers every S subset of T and j outside T (through the equivalent
    one-element-step form) and needs m <= 16. ``sampled`` draws ``k`` random triples
    from a generator seeded with ``seed``.
    """
    m = f.m
    if mode == "exhaustive":
        if m > MAX_EXPLICIT_M:
            raise TooLargeForExhaustive(f"exhaustive check needs m <= {MAX_EXPLICIT_M}, got {m}")
        t = value_table(f)
        bad = _table_violation(t, m, tol=tol)
        checked = 3**m * m if m else 1
        if bad is None:
            return PropertyVerdict(True, checked)
        kind, S, T, j = bad
        return PropertyVerdict(False, checked, kind, S, T, j)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")

    if f.value(()) != 0.0:
        return PropertyVerdict(False, 1, "normalized")
    rng = np.random.default_rng(seed)
    for n_done in range(1, k + 1):
        if m < 1:
            break
        j = int(rng.integers(m))
        others = np.array([x for x in range(m) if x != j], dtype=np.int64)
        in_T = rng.random(others.size) < rng.random()
        T_idx = others[in_T]
        in_S = rng.random(T_idx.size) < rng.random()
        S = frozenset(int(x) + 1 for x in T_idx[in_S])
        T = frozenset(int(x) + 1 for x in T_idx)
        fS, fT = f.value(S), f.value(T)
        fSj, fTj = f.value(S | {j + 1}), f.value(T | {j + 1})
        if fT < fS - tol:
            return PropertyVerdict(False, n_done, "monotone", S, T, None)
        if fTj < fT - tol:
            return PropertyVerdict(False, n_done, "monotone", T, T | {j + 1}, j + 1)
        if fSj - fS < fTj - fT - tol:
            return PropertyVerdict(False, n_done, "submodular", S, T, j + 1)
    return PropertyVerdict(True, k)
