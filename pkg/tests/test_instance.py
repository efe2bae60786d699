import pytest
from hypothesis import given, strategies as st

from subrank import (
    LinearOrdering,
    cover_times,
    make_coverage,
    make_explicit,
    make_modular,
    marginal,
    normalize_thresholds,
    random_instance,
    validate_instance,
)
from subrank.errors import (
    DimensionMismatch,
    ElementInSet,
    InfeasibleCover,
    NegativeWeight,
    NonPositiveThreshold,
    NotAPermutation,
    NotNormalized,
)
from subrank.instance import default_tolerance
from subrank.valuations import Valuation


class Shifted(Valuation):
    m = 2

    def value(self, S):
        return 0.1 + 0.5 * len(set(S))


def test_validate_examples():
    inst = validate_instance(2, [1], [make_modular([0.5, 0.5])])
    assert inst.m == 2 and inst.n == 1
    with pytest.raises(InfeasibleCover):
        validate_instance(2, [1], [make_modular([0.3, 0.3])])
    with pytest.raises(NotNormalized):
        validate_instance(2, [1], [Shifted()])
    with pytest.raises(NegativeWeight):
        validate_instance(2, [-1], [make_modular([0.5, 0.5])])
    with pytest.raises(NegativeWeight):
        validate_instance(2, [0], [make_modular([0.5, 0.5])])
    with pytest.raises(DimensionMismatch):
        validate_instance(3, [1], [make_modular([0.5, 0.5])])
    with pytest.raises(DimensionMismatch):
        validate_instance(2, [1, 1], [make_modular([0.5, 0.5])])


def test_three_thirds_reach_threshold():
    inst = validate_instance(3, [1], [make_modular([1 / 3, 1 / 3, 1 / 3])])
    assert cover_times(inst, (1, 2, 3)).cover_times == (3,)


def test_tolerance_env(monkeypatch):
    monkeypatch.setenv("SUBRANK_TOLERANCE", "0.01")
    assert default_tolerance() == 0.01
    inst = validate_instance(2, [1], [make_modular([0.495, 0.5])])
    assert cover_times(inst, (1, 2)).cover_times == (2,)
    monkeypatch.delenv("SUBRANK_TOLERANCE")
    assert default_tolerance() == 1e-9


def test_normalize_thresholds():
    (g,) = normalize_thresholds([make_modular([1, 2])], [2])
    assert list(g.values) == [0.5, 1.0]
    f = make_coverage([{1, 2}, {3}, {4}], [1, 1, 1, 1], 4)
    (same,) = normalize_thresholds([f], [1])
    assert all(same.value(S) == f.value(S) for S in [(), (1,), (1, 3), (1, 2, 3)])
    with pytest.raises(NonPositiveThreshold):
        normalize_thresholds([f], [0])
    (h,) = normalize_thresholds([f], [0.5])
    assert h.value((1,)) == pytest.approx(1.0)
    (e,) = normalize_thresholds([make_explicit([0, 0.6, 0.5, 1.0])], [2])
    assert e.value((1, 2)) == 0.5


def test_marginal_examples():
    assert marginal(make_modular([0.75, 0.25]), (), 1) == 0.75
    f = make_coverage([{1, 2}, {2, 3}], [1, 1, 1], 3)
    assert marginal(f, {1}, 2) == pytest.approx(1 / 3)
    assert marginal(make_modular([1, 0]), {1}, 2) == 0
    with pytest.raises(ElementInSet):
        marginal(f, {1}, 1)


def test_cover_times_examples(trap4):
    inst = validate_instance(3, [1], [make_modular([0.5, 0.5, 0])])
    assert cover_times(inst, (3, 1, 2)).cover_times == (3,)
    rep = cover_times(trap4, (1, 2, 3, 4))
    assert rep.cover_times == (2, 2, 3, 4)
    assert rep.total_cost == 11
    # closed form (n - sqrt n) * 2 + (3 + ... + sqrt n + 2) at n = 4
    assert rep.total_cost == (4 - 2) * 2 + sum(range(3, 2 + 2 + 1))
    single = validate_instance(2, [5], [make_modular([1, 0])])
    rep = cover_times(single, (1, 2))
    assert rep.cover_times == (1,) and rep.total_cost == 5


def test_not_a_permutation(trap4):
    with pytest.raises(NotAPermutation):
        LinearOrdering((1, 1, 2))
    with pytest.raises(NotAPermutation):
        cover_times(trap4, (1, 2, 3))


@given(st.integers(0, 10_000), st.sampled_from(["modular", "coverage"]), st.randoms(use_true_random=False))
def test_cover_time_properties(seed, family, rnd):
    inst = random_instance(5, 3, family, 0.5, seed)
    perm = list(range(1, 6))
    rnd.shuffle(perm)
    rep = cover_times(inst, perm)
    assert all(1 <= c <= inst.m for c in rep.cover_times)
    # prefix monotonicity
    for f in inst.valuations:
        vals = [f.value(perm[:t]) for t in range(6)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
    # the tail after the last cover step does not matter
    last = max(rep.cover_times)
    tail = perm[last:]
    rnd.shuffle(tail)
    assert cover_times(inst, perm[:last] + tail).total_cost == rep.total_cost
