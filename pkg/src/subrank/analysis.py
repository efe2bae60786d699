"""Runtime audits of the approximation analysis, run diagnostics and histogram export."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadChain, InconsistentTrace, WrongTraceKind
from .instance import Instance, LinearOrdering, cover_times, weighted_cost
from .solvers import RunTrace, brute_force_optimal

BOUND_ATOL = 1e-6
IDENTITY_RTOL = 1e-9


def epsilon_lower_bound(instance: Instance) -> float:
    """Smallest certified lower bound on any positive marginal, across all functions."""
    return min(f.epsilon_lower_bound() for f in instance.valuations)


def gamma_certificate(instance: Instance) -> tuple[float, float]:
    """(eps_hat, gamma) with gamma = ln(1/eps_hat) + 2.

    eps_hat is capped at 1: a marginal above 1 covers its function outright, and the
    cap keeps gamma >= 2 while remaining a valid lower bound.
    """
    eps = min(1.0, epsilon_lower_bound(instance))
    return eps, math.log(1.0 / eps) + 2.0


@dataclass(frozen=True)
class PotentialAudit:
    sums: tuple[float, ...]
    passed: tuple[bool, ...]
    gamma: float

    @property
    def ok(self) -> bool:
        return all(self.passed)


def audit_potential_sums(trace: RunTrace, gamma: float) -> PotentialAudit:
    """Each function's frozen potentials over the whole run must total at most gamma."""
    if trace.kind != "aru":
        raise WrongTraceKind(f"potential-sum audit applies to adaptive residual runs, got {trace.kind!r}")
    sums = []
    for row in trace.potentials:
        total = 0.0
        for p in row:
            total += p
        sums.append(total)
    return PotentialAudit(tuple(sums), tuple(s <= gamma + BOUND_ATOL for s in sums), gamma)


@dataclass(frozen=True)
class ChainAudit:
    total: float
    bound: float
    ok: bool


def audit_chain_sum(chain: Sequence[float]) -> ChainAudit:
    """Sum of (v_t - v_{t-1}) / (1 - v_{t-1}) against ln(1/delta) + 1.

    ``chain`` is a non-decreasing sequence starting at 0 and staying below 1; delta is
    its smallest positive increment. A chain without increments has an infinite bound.
    """
    v = [float(x) for x in chain]
    if not v or v[0] != 0.0:
        raise BadChain("chain must start at 0")
    if v[-1] >= 1.0:
        raise BadChain(f"chain must end below 1, ends at {v[-1]}")
    total = 0.0
    delta = math.inf
    for prev, cur in zip(v, v[1:]):
        step = cur - prev
        if step < 0:
            raise BadChain(f"chain decreases from {prev} to {cur}")
        if step > 0:
            delta = min(delta, step)
        total += step / (1.0 - prev)
    bound = math.log(1.0 / delta) + 1.0 if delta < math.inf else math.inf
    return ChainAudit(total, bound, total <= bound + 1e-9)


def prefix_chains(trace: RunTrace) -> list[list[float]]:
    """Per function, its prefix values strictly before its cover step."""
    return [list(row[:c]) for row, c in zip(trace.prefix_values, trace.cover_times)]


@dataclass(frozen=True)
class RunDiagnostics:
    survivors: tuple[tuple[int, ...], ...]  # 1-based function ids, I_t for t = 1..m
    r: np.ndarray
    q: np.ndarray
    lam: np.ndarray
    delta: np.ndarray
    alg_cost: float
    cost_via_r: float
    cost_via_lambda: float

    def rows(self):
        for t in range(len(self.r)):
            yield t + 1, float(self.r[t]), float(self.q[t]), float(self.lam[t]), float(self.delta[t])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "R", "Q", "Lambda", "Delta"])
        for row in self.rows():
            writer.writerow([row[0]] + [repr(x) for x in row[1:]])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "t": list(range(1, len(self.r) + 1)),
            "R": self.r.tolist(),
            "Q": self.q.tolist(),
            "Lambda": self.lam.tolist(),
            "Delta": self.delta.tolist(),
            "alg_cost": self.alg_cost,
        }


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=IDENTITY_RTOL, abs_tol=1e-12)


def run_diagnostics(instance: Instance, trace: RunTrace) -> RunDiagnostics:
    m = instance.m
    w = instance.weights
    if trace.potentials.shape != (instance.n, m):
        raise InconsistentTrace("trace does not match instance dimensions")
    c = trace.cover_times
    survivors = tuple(tuple(i + 1 for i in range(instance.n) if c[i] >= t) for t in range(1, m + 1))
    r = np.zeros(m)
    for t, alive in enumerate(survivors):
        acc = 0.0
        for i in alive:
            acc += w[i - 1]
        r[t] = acc
    q = np.array(trace.q, dtype=float)
    for t in range(m):
        acc = 0.0
        for i in range(instance.n):
            acc += w[i] * trace.potentials[i, t]
        if not _close(acc, q[t]):
            raise InconsistentTrace(f"Q_{t + 1} = {q[t]} but potentials give {acc}")
    lam = np.zeros(m)
    for t in range(m):
        if q[t] > 0:
            lam[t] = r[t] / q[t]
        elif r[t] > 0:
            raise InconsistentTrace(f"step {t + 1} has uncovered weight {r[t]} but no potential mass")
    delta = np.zeros(m)
    acc = 0.0
    for t in range(m - 1, -1, -1):
        acc += q[t]
        delta[t] = acc
    alg_cost = weighted_cost(w, c)
    via_r = float(sum(r.tolist()))
    via_lam = float(sum((lam * q).tolist()))
    if not (_close(alg_cost, via_r) and _close(alg_cost, via_lam)):
        raise InconsistentTrace(f"cost identities broken: {alg_cost}, {via_r}, {via_lam}")
    return RunDiagnostics(survivors, r, q, lam, delta, alg_cost, via_r, via_lam)


def width_bound(diag: RunDiagnostics, gamma: float) -> tuple[bool, ...]:
    """Delta_t' <= gamma * R_t' at every step."""
    return tuple(bool(d <= gamma * r + BOUND_ATOL) for d, r in zip(diag.delta, diag.r))


@dataclass(frozen=True)
class Bar:
    width: float
    height: float
    label: str


@dataclass(frozen=True)
class HistogramExport:
    bars: tuple[Bar, ...]

    @property
    def total_area(self) -> float:
        total = 0.0
        for b in self.bars:
            total += b.width * b.height
        return total

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["width", "height", "label"])
        for b in self.bars:
            writer.writerow([repr(b.width), repr(b.height), b.label])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "bars": [{"width": b.width, "height": b.height, "label": b.label} for b in self.bars],
            "total_area": self.total_area,
        }


def export_histograms(
    instance: Instance,
    optimal: LinearOrdering,
    trace: RunTrace,
    include_zero: bool = False,
) -> tuple[HistogramExport, HistogramExport]:
    """Histogram of a reference ordering and of the run.

    Reference: one bar per function, width w_i, height its cover time, sorted by height.
    Run: one bar per (function, step) with width w_i * P and height Lambda of that step,
    in selection order. Zero-width bars are dropped unless ``include_zero``.
    """
    times = cover_times(instance, optimal).cover_times
    order = sorted(range(instance.n), key=lambda i: (times[i], i))
    opt_bars = tuple(Bar(instance.weights[i], float(times[i]), f"f{i + 1}") for i in order)

    diag = run_diagnostics(instance, trace)
    alg_bars = []
    for t in range(instance.m):
        j = trace.ordering.order[t]
        for i in range(instance.n):
            width = instance.weights[i] * trace.potentials[i, t]
            if width == 0 and not include_zero:
                continue
            alg_bars.append(Bar(float(width), float(diag.lam[t]), f"t{t + 1}:f{i + 1}:e{j}"))
    return HistogramExport(opt_bars), HistogramExport(tuple(alg_bars))


@dataclass(frozen=True)
class BoundCertificate:
    epsilon_hat: float
    gamma: float
    per_function_potential_sums: tuple[float, ...]
    potential_sums_ok: bool
    width_bound_ok: tuple[bool, ...]
    alg_cost: float
    reference_cost: float | None = None
    ratio_vs_reference: float | None = None
    reference_kind: str | None = None
    ratio_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return self.potential_sums_ok and all(self.width_bound_ok) and self.ratio_ok is not False

    def to_dict(self) -> dict:
        return {
            "epsilon_hat": self.epsilon_hat,
            "gamma": self.gamma,
            "four_gamma": 4 * self.gamma,
            "per_function_potential_sums": list(self.per_function_potential_sums),
            "potential_sums_ok": self.potential_sums_ok,
            "width_bound_ok": all(self.width_bound_ok),
            "alg_cost": self.alg_cost,
            "reference_kind": self.reference_kind,
            "reference_cost": self.reference_cost,
            "ratio_vs_reference": self.ratio_vs_reference,
            "ratio_ok": self.ratio_ok,
            "ok": self.ok,
        }


def approximation_report(
    instance: Instance,
    trace: RunTrace,
    reference: str | LinearOrdering | None = "brute-force",
    brute_limit: int = 9,
) -> BoundCertificate:
    """Certify one adaptive residual run.

    ``reference`` is "brute-force" (exact optimum; the ratio must stay within 4*gamma),
    a LinearOrdering to compare against, or None.
    """
    eps, gamma = gamma_certificate(instance)
    pot = audit_potential_sums(trace, gamma)
    diag = run_diagnostics(instance, trace)
    widths = width_bound(diag, gamma)
    ref_cost = ratio = kind = ratio_ok = None
    if isinstance(reference, LinearOrdering):
        kind = "alternate-ordering"
        ref_cost = cover_times(instance, reference).total_cost
    elif reference == "brute-force":
        kind = "brute-force-opt"
        _, ref_cost = brute_force_optimal(instance, limit=brute_limit)
    elif reference is not None:
        raise ValueError(f"unknown reference {reference!r}")
    if ref_cost is not None:
        ratio = diag.alg_cost / ref_cost
        if kind == "brute-force-opt":
            ratio_ok = diag.alg_cost <= 4 * gamma * ref_cost + BOUND_ATOL
    return BoundCertificate(
        epsilon_hat=eps,
        gamma=gamma,
        per_function_potential_sums=pot.sums,
        potential_sums_ok=pot.ok,
        width_bound_ok=widths,
        alg_cost=diag.alg_cost,
        reference_cost=ref_cost,
        ratio_vs_reference=ratio,
        reference_kind=kind,
        ratio_ok=ratio_ok,
    )
