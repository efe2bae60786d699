"""Ordering algorithms: adaptive residual updates, cumulative greedy, exact brute force."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ElementInSet, TooLarge
from .instance import Instance, LinearOrdering, cover_times, cover_times_from_prefix, weighted_cost
from .valuations import Valuation


@dataclass(frozen=True)
class RunTrace:
    """Full record of one greedy-style run.

    ``potentials[:, t]`` is the potential column of the element picked at step t+1,
    frozen at selection time. ``prefix_values[i, t]`` is f^i(S_t) for t = 0..m.
    """

    ordering: LinearOrdering
    potentials: np.ndarray  # shape (n, m)
    q: np.ndarray  # shape (m,)
    prefix_values: np.ndarray  # shape (n, m + 1)
    weights: tuple[float, ...]
    tol: float

    @property
    def kind(self) -> str:
        return self.ordering.producer

    @property
    def cover_times(self) -> tuple[int, ...]:
        return cover_times_from_prefix(self.prefix_values, 1.0 - self.tol)

    @property
    def total_cost(self) -> float:
        return weighted_cost(self.weights, self.cover_times)


def potential_value(f: Valuation, S, j: int, tol: float = 0.0) -> float:
    """Residual-normalized marginal of element j for f given the selected set S."""
    S = frozenset(int(x) for x in S)
    if j in S:
        raise ElementInSet(f"element {j} already in S")
    fS = f.value(S)
    if fS >= 1.0 - tol:
        return 0.0
    return min(1.0, (f.value(S | {j}) - fS) / (1.0 - fS))


def _aru_rule(marg: np.ndarray, resid: np.ndarray) -> np.ndarray:
    return np.minimum(1.0, marg / resid[:, None])


def _greedy_rule(marg: np.ndarray, resid: np.ndarray) -> np.ndarray:
    return np.minimum(marg, resid[:, None])


def _run(instance: Instance, rule, producer: str) -> RunTrace:
    m, n = instance.m, instance.n
    thr = instance.threshold
    w = np.asarray(instance.weights, dtype=float)
    evals = [f.evaluator() for f in instance.valuations]
    values = np.array([e.value for e in evals], dtype=float)

    potentials = np.zeros((n, m))
    q = np.zeros(m)
    prefix = np.zeros((n, m + 1))
    prefix[:, 0] = values
    selected = np.zeros(m, dtype=bool)
    order = []

    for t in range(m):
        # covered functions have identically zero potential and are skipped
        active = np.flatnonzero(values < thr)
        scores = np.zeros(m)
        P = None
        if active.size:
            marg = np.vstack([evals[i].marginals() for i in active])
            P = rule(marg, 1.0 - values[active])
            weighted = w[active, None] * P
            # left-to-right accumulation in function order keeps scores reproducible
            for row in weighted:
                scores += row
        scores[selected] = -np.inf
        j = int(np.argmax(scores))  # first maximum = lowest element index
        if P is not None:
            potentials[active, t] = P[:, j]
        q[t] = scores[j] if active.size else 0.0
        selected[j] = True
        order.append(j + 1)
        for i, ev in enumerate(evals):
            ev.add(j)
            values[i] = ev.value
        prefix[:, t + 1] = values

    return RunTrace(
        ordering=LinearOrdering(tuple(order), producer),
        potentials=potentials,
        q=q,
        prefix_values=prefix,
        weights=instance.weights,
        tol=instance.tol,
    )


def adaptive_residual_updates(instance: Instance) -> RunTrace:
    """Repeatedly pick the element maximizing sum_i w_i * min(1, marginal_i / residual_i)."""
    return _run(instance, _aru_rule, "aru")


def cumulative_greedy(instance: Instance) -> RunTrace:
    """Baseline using absolute truncated marginals min(marginal_i, residual_i)."""
    return _run(instance, _greedy_rule, "greedy")


def brute_force_optimal(instance: Instance, limit: int = 9) -> tuple[LinearOrdering, float]:
    """Exact optimum by depth-first branch and bound over all orderings.

    Children are explored in increasing element order and only strict improvements
    are kept, so the lexicographically smallest optimal ordering is returned. The
    bound charges every uncovered function at least one more step.
    """
    m, n = instance.m, instance.n
    if m > limit:
        raise TooLarge(f"brute force limited to m <= {limit}, got m={m}")
    thr = instance.threshold
    w = instance.weights
    funcs = instance.valuations
    memo: dict[int, int] = {}

    def covered(mask: int) -> int:
        # bitset of functions covered by the element set `mask`
        hit = memo.get(mask)
        if hit is None:
            S = [k + 1 for k in range(m) if mask >> k & 1]
            hit = 0
            for i, f in enumerate(funcs):
                if f.value(S) >= thr:
                    hit |= 1 << i
            memo[mask] = hit
        return hit

    all_funcs = (1 << n) - 1
    best_cost = float("inf")
    best_order: list[int] | None = None
    path: list[int] = []

    def dfs(mask: int, done: int, cost: float, remaining_w: float):
        nonlocal best_cost, best_order
        depth = len(path)
        if done == all_funcs:
            if cost < best_cost:
                best_cost = cost
                best_order = path + [k + 1 for k in range(m) if not mask >> k & 1]
            return
        if depth == m:
            return
        if cost + remaining_w * (depth + 1) >= best_cost:
            return
        for k in range(m):
            if mask >> k & 1:
                continue
            new_mask = mask | 1 << k
            hit = covered(new_mask)
            fresh = hit & ~done
            add = 0.0
            fresh_w = 0.0
            for i in range(n):
                if fresh >> i & 1:
                    add += w[i] * (depth + 1)
                    fresh_w += w[i]
            path.append(k + 1)
            dfs(new_mask, done | hit, cost + add, remaining_w - fresh_w)
            path.pop()

    start = covered(0)
    dfs(0, start, 0.0, sum(w[i] for i in range(n) if not start >> i & 1))
    if best_order is None:
        raise TooLarge("no covering ordering found")
    ordering = LinearOrdering(tuple(best_order), "brute-force")
    return ordering, cover_times(instance, ordering).total_cost
