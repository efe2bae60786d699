import itertools

import pytest
from conftest import enumerate_optimum

from subrank import (
    SetCoverInput,
    brute_force_optimal,
    check_submodular_monotone_normalized,
    cover_times,
    from_set_cover,
    gamma_certificate,
    greedy_trap,
    min_sum_set_cover,
    multiple_intents,
    random_instance,
)
from subrank.errors import BadEntry, BadParams, InfeasibleCover, NotPerfectSquare, UncoverableUniverseItem
from subrank.generators import random_set_cover_input
from subrank.serialize import dumps_instance


def min_cover_size(sc):
    for k in range(1, len(sc.sets) + 1):
        for combo in itertools.combinations(sc.sets, k):
            if frozenset().union(*combo) == frozenset(range(1, sc.universe_size + 1)):
                return k
    raise AssertionError("uncoverable")


def test_from_set_cover_examples():
    sc = SetCoverInput(3, ({1, 2}, {2, 3}, {3}))
    inst = from_set_cover(sc)
    assert inst.n == 1 and inst.m == 3 and inst.weights == (1.0,)
    assert enumerate_optimum(inst)[0] == min_cover_size(sc) == 2
    assert brute_force_optimal(from_set_cover(SetCoverInput(1, ({1},))))[1] == 1
    with pytest.raises(UncoverableUniverseItem):
        SetCoverInput(2, ({1},))


def test_reduction_preserves_optimum_on_small_inputs():
    for seed in range(25):
        sc = random_set_cover_input(5, 4, seed)
        assert brute_force_optimal(from_set_cover(sc))[1] == min_cover_size(sc)


def test_greedy_trap_shape():
    inst = greedy_trap(4)
    assert inst.m == 4 and inst.n == 4
    assert [list(f.values) for f in inst.valuations[:2]] == [[0.75, 0.25, 0, 0]] * 2
    assert list(inst.valuations[2].values) == [0, 0, 1, 0]
    assert list(inst.valuations[3].values) == [0, 0, 0, 1]
    with pytest.raises(NotPerfectSquare, match="n must be a perfect square"):
        greedy_trap(5)
    for n in (4, 100, 400):
        for f in greedy_trap(n).valuations:
            assert f.full_value() == 1.0


def test_greedy_trap_column_order_cost():
    inst = greedy_trap(100)
    assert cover_times(inst, range(1, 13)).total_cost == 90 * 2 + sum(range(3, 13)) == 255


def test_min_sum_set_cover_examples():
    # universe {a, b} -> items 1, 2; S1 = {a}, S2 = {a, b}
    inst = min_sum_set_cover(SetCoverInput(2, ({1}, {1, 2})))
    assert cover_times(inst, (2, 1)).total_cost == 2
    assert cover_times(inst, (1, 2)).total_cost == 3
    assert cover_times(min_sum_set_cover(SetCoverInput(1, ({1},))), (1,)).total_cost == 1
    assert gamma_certificate(inst) == (1.0, 2.0)


def test_multiple_intents():
    inst = multiple_intents([[0.5, 0.5, 0]], [0.5], [1])
    assert cover_times(inst, (1, 2, 3)).cover_times == (2,)
    boolean = multiple_intents([[1, 0, 1], [0, 1, 0]], [1, 1], [1, 1])
    msc = min_sum_set_cover(SetCoverInput(2, ({1}, {2}, {1})))
    for perm in itertools.permutations(range(1, 4)):
        assert cover_times(boolean, perm).total_cost == cover_times(msc, perm).total_cost
    with pytest.raises(BadEntry):
        multiple_intents([[0.3, 0.5, 0.5]], [0.5], [1])
    with pytest.raises(InfeasibleCover):
        multiple_intents([[0.5, 0, 0]], [0.5], [1])


def test_random_instance_is_deterministic():
    a = random_instance(6, 3, "modular", 0.5, 42)
    b = random_instance(6, 3, "modular", 0.5, 42)
    assert dumps_instance(a) == dumps_instance(b)
    c = random_instance(6, 3, "coverage", 0.5, 42)
    assert dumps_instance(c) == dumps_instance(random_instance(6, 3, "coverage", 0.5, 42))
    assert dumps_instance(a) != dumps_instance(random_instance(6, 3, "modular", 0.5, 43))
    with pytest.raises(BadParams):
        random_instance(0, 3)
    with pytest.raises(BadParams):
        random_instance(3, 3, density=0)


@pytest.mark.parametrize("seed", range(10))
def test_random_coverage_is_submodular(seed):
    inst = random_instance(7, 3, "coverage", 0.3, seed)
    for f in inst.valuations:
        assert check_submodular_monotone_normalized(f, mode="sampled", k=1000, seed=seed).ok
        assert check_submodular_monotone_normalized(f).ok


def test_large_universe_generation():
    inst = random_instance(20, 2, "coverage", 0.01, 1, universe_size=5000)
    f = inst.valuations[0]
    assert f.universe_size == 5000
    assert f.full_value() >= 1.0
