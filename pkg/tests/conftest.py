import itertools
import re

import pytest
from hypothesis import settings

from subrank.instance import cover_times

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")

_acceptance = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[key] = (m.group(2), report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance):
        name, outcome, duration = _acceptance[key]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {verdict}  {name}  ({duration:.2f}s)")


def enumerate_optimum(instance):
    """Plain enumeration of all orderings; returns (best cost, lexicographically first optimal order)."""
    best = None
    for perm in itertools.permutations(range(1, instance.m + 1)):
        cost = cover_times(instance, perm).total_cost
        if best is None or cost < best[0]:
            best = (cost, perm)
    return best


def naive_run(instance, absolute=False):
    """Slow reference for both greedy rules, built only on value queries."""
    thr = instance.threshold
    S = []
    order = []
    for _ in range(instance.m):
        best_j, best_score = None, None
        for j in range(1, instance.m + 1):
            if j in S:
                continue
            score = 0.0
            for w, f in zip(instance.weights, instance.valuations):
                fS = f.value(S)
                if fS >= thr:
                    continue
                gain = f.value(S + [j]) - fS
                p = min(gain, 1 - fS) if absolute else min(1.0, gain / (1 - fS))
                score += w * p
            if best_score is None or score > best_score:
                best_j, best_score = j, score
        S.append(best_j)
        order.append(best_j)
    return tuple(order)


@pytest.fixture
def trap4():
    from subrank import greedy_trap

    return greedy_trap(4)
