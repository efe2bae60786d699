"""Instance builders: set-cover reduction, greedy trap, special cases, seeded random instances."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadEntry, BadParams, InfeasibleCover, NotPerfectSquare, UncoverableUniverseItem
from .instance import Instance, default_tolerance, validate_instance
from .valuations import CoverageValuation, ModularValuation

MAX_TRAP_N = 10**6


@dataclass(frozen=True)
class SetCoverInput:
    """Universe 1..universe_size and a family of subsets; element j of the ranking is sets[j-1]."""

    universe_size: int
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        sets = tuple(frozenset(int(x) for x in s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if self.universe_size < 1 or not sets:
            raise BadParams("set cover input needs a non-empty universe and at least one set")
        for s in sets:
            bad = [x for x in s if not 1 <= x <= self.universe_size]
            if bad:
                raise BadParams(f"item {bad[0]} outside universe 1..{self.universe_size}")
        reached = frozenset().union(*sets)
        missing = sorted(set(range(1, self.universe_size + 1)) - reached)
        if missing:
            raise UncoverableUniverseItem(f"universe item {missing[0]} belongs to no set")


def from_set_cover(sc: SetCoverInput, tol: float | None = None) -> Instance:
    """One function f(T) = |union of chosen sets| / universe_size with weight 1."""
    f = CoverageValuation(sc.sets, np.ones(sc.universe_size), float(sc.universe_size))
    return validate_instance(len(sc.sets), [1.0], [f], tol=tol)


def min_sum_set_cover(sc: SetCoverInput, tol: float | None = None) -> Instance:
    """One 0/1 function per universe item, equal to 1 once a set containing it is chosen."""
    funcs = [
        CoverageValuation([{1} if item in s else set() for s in sc.sets], [1.0], 1.0)
        for item in range(1, sc.universe_size + 1)
    ]
    return validate_instance(len(sc.sets), [1.0] * len(funcs), funcs, tol=tol)


def greedy_trap(n: int, tol: float | None = None) -> Instance:
    """Modular instance on which cumulative greedy pays Theta(sqrt(n)) times the optimum.

    m = sqrt(n) + 2 elements; n - sqrt(n) functions value (1 - 1/n, 1/n, 0, ...) and
    the remaining sqrt(n) functions each value a single element 3..m at 1.
    """
    n = int(n)
    r = math.isqrt(n) if n >= 0 else -1
    if n < 4 or r * r != n:
        raise NotPerfectSquare(f"n must be a perfect square >= 4, got {n}")
    if n > MAX_TRAP_N:
        raise BadParams(f"n capped at {MAX_TRAP_N}")
    m = r + 2
    heavy = np.zeros(m)
    heavy[0], heavy[1] = 1.0 - 1.0 / n, 1.0 / n
    funcs = [ModularValuation(heavy)] * (n - r)
    for k in range(r):
        row = np.zeros(m)
        row[k + 2] = 1.0
        funcs.append(ModularValuation(row))
    return validate_instance(m, [1.0] * n, funcs, tol=tol)


def multiple_intents(values, nu, weights, tol: float | None = None) -> Instance:
    """Modular functions whose row i only takes values in {0, nu_i}."""
    V = np.asarray(values, dtype=float)
    if V.ndim != 2:
        raise BadParams("values must be an n x m matrix")
    n, m = V.shape
    nu = np.asarray(nu, dtype=float).reshape(-1)
    if nu.size != n or len(weights) != n:
        raise BadParams(f"need {n} nu values and weights, got {nu.size} and {len(weights)}")
    for i in range(n):
        if not 0 < nu[i] <= 1:
            raise BadEntry(f"nu_{i + 1} = {nu[i]} outside (0, 1]")
        for j in range(m):
            x = V[i, j]
            if x != 0 and not math.isclose(x, nu[i], rel_tol=1e-12, abs_tol=0.0):
                raise BadEntry(f"entry ({i + 1}, {j + 1}) = {x} not in {{0, {nu[i]}}}")
    funcs = [ModularValuation(row) for row in V]
    slack = default_tolerance() if tol is None else tol
    for i, f in enumerate(funcs):
        if f.full_value() < 1.0 - slack:
            raise InfeasibleCover(f"row {i + 1} sums to {f.full_value()} < 1")
    return validate_instance(m, list(weights), funcs, tol=tol)


def random_instance(
    m: int,
    n: int,
    family: str = "modular",
    density: float = 0.5,
    seed: int = 0,
    universe_size: int | None = None,
    tol: float | None = None,
) -> Instance:
    """Seeded random instance; identical arguments give identical instances.

    modular: each entry is non-zero with probability ``density``; rows are rescaled so
    their totals land in [1, 1.5]. coverage: every universe item is first given to one
    random element, then each (element, item) pair is added with probability ``density``;
    the normalizer is a random 60-100% of the total item weight.
    """
    if m < 1 or n < 1 or not 0 < density <= 1:
        raise BadParams(f"need m, n >= 1 and 0 < density <= 1, got m={m}, n={n}, density={density}")
    if family not in ("modular", "coverage"):
        raise BadParams(f"unknown family {family!r}")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.1, 1.0, size=n).round(6)
    funcs = []
    if family == "modular":
        for _ in range(n):
            row = np.where(rng.random(m) < density, rng.uniform(0.05, 1.0, size=m), 0.0)
            if not row.any():
                row[rng.integers(m)] = 1.0
            row = row * (rng.uniform(1.0, 1.5) / row.sum())
            funcs.append(ModularValuation(row))
    else:
        N = int(universe_size) if universe_size is not None else 2 * m
        if N < 1:
            raise BadParams("universe_size must be positive")
        for _ in range(n):
            owner = rng.integers(m, size=N)
            extra = rng.binomial(m * N, density)
            pos = rng.integers(m * N, size=extra)
            keys = np.unique(np.concatenate([owner * N + np.arange(N), pos]))
            cuts = np.searchsorted(keys // N, np.arange(1, m))
            sets = [(chunk % N + 1).tolist() for chunk in np.split(keys, cuts)]
            item_w = rng.uniform(0.5, 1.5, size=N).round(6)
            normalizer = float(item_w.sum()) * rng.uniform(0.6, 1.0)
            funcs.append(CoverageValuation(sets, item_w, normalizer))
    return validate_instance(m, weights.tolist(), funcs, tol=tol)


def random_set_cover_input(universe_size: int, n_sets: int, seed: int, density: float = 0.4) -> SetCoverInput:
    """Random coverable set family; each item lands in at least one set."""
    rng = np.random.default_rng(seed)
    sets = [set() for _ in range(n_sets)]
    for item in range(1, universe_size + 1):
        sets[rng.integers(n_sets)].add(item)
        for s in sets:
            if rng.random() < density:
                s.add(item)
    return SetCoverInput(universe_size, tuple(frozenset(s) for s in sets))
