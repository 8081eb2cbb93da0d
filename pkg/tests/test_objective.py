import itertools

import numpy as np
import pytest
from conftest import random_instance
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exceptions import ContractViolationError, InstanceTooLargeError, MissingMatrixError
from src.models.instance import Assignment, QapInstance
from src.qap.objective import brute_force, cost, cost_linear, objective, swap_delta


def double_sum(flow, distance, perm, linear=None):
    """Reference objective written as the literal loops."""
    n = len(perm)
    total = 0
    for i in range(n):
        for j in range(n):
            total += int(flow[i][j]) * int(distance[perm[i]][perm[j]])
    if linear is not None:
        total += sum(int(linear[perm[i]][i]) for i in range(n))
    return total


def swapped(perm, i, j):
    out = list(perm)
    out[i], out[j] = out[j], out[i]
    return out


def test_zero_flow_costs_nothing():
    inst = QapInstance(flow=np.zeros((4, 4), dtype=int), distance=random_instance(4, 1).distance)
    assert cost(inst, Assignment.of([2, 0, 3, 1])) == 0


def test_tiny_instance_hand_value(tiny):
    assert cost(tiny, Assignment.of([0, 1])) == 6
    assert cost(tiny, Assignment.of([1, 0])) == 6


def test_cost_is_integer_for_integer_data(tiny):
    assert isinstance(cost(tiny, Assignment.identity(2)), int)


def test_dimension_mismatch_is_a_contract_violation(tiny):
    with pytest.raises(ContractViolationError):
        cost(tiny, Assignment.identity(3))


@pytest.mark.parametrize("seed", range(5))
def test_all_permutations_match_reference_n3(seed):
    inst = random_instance(3, seed)
    for perm in itertools.permutations(range(3)):
        assert cost(inst, Assignment.of(perm)) == double_sum(inst.flow, inst.distance, perm)


def test_oracle_equivalence_over_random_instances():
    for trial in range(100):
        n = 3 + trial % 5
        inst = random_instance(n, 1000 + trial)
        perms = itertools.islice(itertools.permutations(range(n)), 200)
        for perm in perms:
            assert cost(inst, Assignment.of(perm)) == double_sum(inst.flow, inst.distance, perm)


def test_linear_term_hand_value(tiny):
    inst = QapInstance(flow=tiny.flow, distance=tiny.distance, linear_cost=[[5, 0], [0, 7]])
    assert cost_linear(inst, Assignment.of([0, 1])) == 18


def test_zero_linear_term_equals_quadratic_cost():
    base = random_instance(5, 9)
    inst = QapInstance(flow=base.flow, distance=base.distance, linear_cost=np.zeros((5, 5), dtype=int))
    a = Assignment.of([4, 2, 0, 1, 3])
    assert cost_linear(inst, a) == cost(base, a)


def test_linear_term_all_permutations_n3():
    inst = random_instance(3, 4, linear=True)
    for perm in itertools.permutations(range(3)):
        expected = double_sum(inst.flow, inst.distance, perm, inst.linear_cost)
        assert cost_linear(inst, Assignment.of(perm)) == expected


def test_linear_cost_requires_matrix(tiny):
    with pytest.raises(MissingMatrixError):
        cost_linear(tiny, Assignment.identity(2))


def test_identity_swap_has_no_effect(tiny):
    assert swap_delta(tiny, Assignment.identity(2), 1, 1) == 0


def test_swap_delta_index_bounds(tiny):
    with pytest.raises(IndexError):
        swap_delta(tiny, Assignment.identity(2), 0, 2)


def test_swap_delta_matches_full_recompute_on_many_draws():
    rng = np.random.default_rng(2024)
    for draw in range(10_000):
        n = int(rng.integers(2, 9))
        inst = random_instance(n, draw % 50, linear=draw % 3 == 0)
        perm = rng.permutation(n).tolist()
        i, j = (int(v) for v in rng.integers(n, size=2))
        before = objective(inst, np.array(perm))
        after = objective(inst, np.array(swapped(perm, i, j)))
        assert swap_delta(inst, Assignment.of(perm), i, j) == after - before


def test_swap_delta_on_symmetric_instance_matches_classical_formula():
    inst = random_instance(6, 17, symmetric=True)
    f, d = inst.flow, inst.distance
    perm = [3, 1, 5, 0, 2, 4]
    for r, s in itertools.combinations(range(6), 2):
        pr, ps = perm[r], perm[s]
        classical = 2 * sum(
            (f[k, r] - f[k, s]) * (d[perm[k], ps] - d[perm[k], pr]) for k in range(6) if k not in (r, s)
        )
        assert swap_delta(inst, Assignment.of(perm), r, s) == classical


@settings(max_examples=50)
@given(seed=st.integers(min_value=0, max_value=10_000), data=st.data())
def test_swap_is_an_involution(seed, data):
    inst = random_instance(7, seed)
    perm = data.draw(st.permutations(list(range(7))))
    i = data.draw(st.integers(min_value=0, max_value=6))
    j = data.draw(st.integers(min_value=0, max_value=6))
    there = swap_delta(inst, Assignment.of(perm), i, j)
    back = swap_delta(inst, Assignment.of(swapped(perm, i, j)), i, j)
    assert there + back == 0


def test_transposing_symmetric_instance_keeps_cost():
    inst = random_instance(5, 8, symmetric=True)
    transposed = QapInstance(flow=inst.flow.T, distance=inst.distance.T)
    a = Assignment.of([1, 3, 0, 4, 2])
    assert cost(transposed, a) == cost(inst, a)


def test_brute_force_tiny(tiny):
    a, best = brute_force(tiny)
    assert best == 6
    assert a.perm == (0, 1)


def test_brute_force_ties_take_identity():
    inst = QapInstance(flow=np.zeros((4, 4), dtype=int), distance=np.zeros((4, 4), dtype=int))
    a, best = brute_force(inst)
    assert best == 0
    assert a.perm == (0, 1, 2, 3)


@pytest.mark.parametrize("seed", range(5))
def test_brute_force_matches_enumeration_n4(seed):
    inst = random_instance(4, seed)
    values = {perm: double_sum(inst.flow, inst.distance, perm) for perm in itertools.permutations(range(4))}
    a, best = brute_force(inst)
    assert best == min(values.values())
    assert a.perm == min(perm for perm, value in values.items() if value == best)


def test_brute_force_includes_linear_term():
    inst = random_instance(4, 21, linear=True)
    expected = min(
        double_sum(inst.flow, inst.distance, perm, inst.linear_cost) for perm in itertools.permutations(range(4))
    )
    assert brute_force(inst)[1] == expected


@pytest.mark.parametrize("seed", range(3))
def test_no_assignment_beats_the_optimum(seed):
    inst = random_instance(6, seed)
    _, best = brute_force(inst)
    for perm in itertools.permutations(range(6)):
        assert cost(inst, Assignment.of(perm)) >= best


def test_brute_force_refuses_large_instances():
    with pytest.raises(InstanceTooLargeError):
        brute_force(random_instance(12, 0))
