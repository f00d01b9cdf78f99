import numpy as np
import pytest

from counting import dim_invariants
from permCore import (BudgetExceededError, CoveringGraph, Permutation, PermTuple, PermutationError, canonical_form,
                      class_count, components, compose, conjugate, enumerate_orbits, enumeration_cost, inverse, is_connected, multiplicities,
                      orbit_key, perm_tuple_from_json, perm_tuple_to_json, random_perm_tuple, star, star_orbits,
                      to_covering_graph)


def P(*images):
    return Permutation(images)


def T(*perms):
    return PermTuple([list(p) for p in perms])


def test_compose():
    assert compose(P(2, 1), P(2, 1)) == P(1, 2)
    assert compose(Permutation.identity(3), P(3, 1, 2)) == P(3, 1, 2)
    assert compose(P(2, 3, 1), P(2, 3, 1)) == P(3, 1, 2)


def test_compose_size_mismatch():
    with pytest.raises(PermutationError):
        compose(P(2, 1), P(1, 2, 3))


def test_invalid_permutation():
    with pytest.raises(PermutationError):
        Permutation([1, 1])
    with pytest.raises(PermutationError):
        PermTuple([[2, 1], [1, 2, 3]])
    with pytest.raises(PermutationError):
        PermTuple([])


@pytest.mark.parametrize("images", [[1.9, 2.2], [1.0, 2.0], ["a", "b"], [True, 2], [None, 1]])
def test_permutation_entries_must_be_integers(images):
    with pytest.raises(PermutationError):
        Permutation(images)


def test_permutation_accepts_numpy_integers():
    assert Permutation(np.array([2, 1])) == P(2, 1)


def test_inverse():
    assert inverse(P(1, 2)) == P(1, 2)
    assert inverse(P(2, 1)) == P(2, 1)
    assert inverse(P(2, 3, 1)) == P(3, 1, 2)
    p = P(4, 1, 3, 5, 2)
    assert compose(p, inverse(p)).is_identity()


def test_cycle_type():
    assert P(2, 3, 1, 5, 4).cycle_type() == (3, 2)
    assert P(2, 3, 1, 5, 4).cycles() == [(1, 2, 3), (4, 5)]


def test_conjugate():
    t = T((2, 3, 1), (1, 3, 2))
    assert conjugate(t, Permutation.identity(3)) == t
    assert conjugate(T((2, 1), (1, 2)), P(2, 1)) == T((2, 1), (1, 2))
    assert conjugate(T((2, 3, 1)), P(2, 1, 3)) == T((3, 1, 2))
    with pytest.raises(PermutationError):
        conjugate(t, P(2, 1))


def test_canonical_form_examples():
    key, witness = canonical_form(T((1,), (1,)))
    assert key.tuple == T((1,), (1,))
    assert witness.is_identity()
    for cycle in [(2, 3, 1), (3, 1, 2)]:
        assert canonical_form(T(cycle))[0].tuple == T((2, 3, 1))
    assert canonical_form(T((2, 1), (1, 2)))[0].tuple == T((2, 1), (1, 2))


def test_canonical_form_orbit_constant_and_idempotent():
    rng = np.random.default_rng(3)
    for _ in range(30):
        t = random_perm_tuple(5, 2, rng)
        key, witness = canonical_form(t)
        assert conjugate(t, witness) == key.tuple
        assert canonical_form(key.tuple)[0] == key
        pi = Permutation.from_zero_based(rng.permutation(5).tolist())
        assert orbit_key(conjugate(t, pi)) == key


def test_canonical_form_is_least_in_orbit():
    t = T((3, 1, 2, 4), (1, 4, 3, 2))
    key = orbit_key(t)
    import itertools
    orbit = [conjugate(t, Permutation(p)) for p in itertools.permutations(range(1, 5))]
    assert key.tuple == min(orbit)


def test_star():
    assert star(T((2, 1)), T((2, 1))) == T((2, 1, 4, 3))
    t = T((2, 3, 1), (1, 3, 2))
    assert star(t, PermTuple.identity(1, 2)) == T((2, 3, 1, 4), (1, 3, 2, 4))
    with pytest.raises(PermutationError):
        star(T((2, 1)), T((2, 1), (1, 2)))


def test_star_commutative_and_associative_on_orbits():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a, b, c = (orbit_key(random_perm_tuple(int(rng.integers(1, 4)), 2, rng)) for _ in range(3))
        assert star_orbits(a, b) == star_orbits(b, a)
        assert star_orbits(star_orbits(a, b), c) == star_orbits(a, star_orbits(b, c))


def test_is_connected():
    assert is_connected(T((1,), (1,)))
    assert not is_connected(PermTuple.identity(2, 2))
    assert is_connected(T((2, 1), (1, 2)))


def test_components():
    t = T((2, 1, 3), (2, 1, 3))
    assert components(T((2, 1), (1, 2))) == [orbit_key(T((2, 1), (1, 2)))]
    assert components(PermTuple.identity(2, 2)) == [orbit_key(T((1,), (1,)))] * 2
    assert components(T((2, 1, 3), (1, 2, 3))) == [orbit_key(T((1,), (1,))), orbit_key(T((2, 1), (1, 2)))]
    assert len(components(t)) == 2


def test_components_of_star_and_connectivity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        t1 = random_perm_tuple(int(rng.integers(1, 5)), 2, rng)
        t2 = random_perm_tuple(int(rng.integers(1, 5)), 2, rng)
        assert components(star(t1, t2)) == sorted(components(t1) + components(t2))
        assert is_connected(t1) == (len(components(t1)) == 1)


def test_multiplicities():
    keys = components(PermTuple.identity(3, 2))
    assert multiplicities(keys) == [(orbit_key(T((1,), (1,))), 3)]


def test_enumerate_orbits_counts():
    assert len(enumerate_orbits(3, 2, False)) == 4
    assert len(enumerate_orbits(3, 2, True)) == 3
    assert len(enumerate_orbits(2, 3, False)) == 3
    assert len(enumerate_orbits(3, 3, False)) == 11
    assert len(enumerate_orbits(3, 3, True)) == 7


def test_enumerate_orbits_matches_dimension_formula():
    for k, m in [(2, 5), (3, 4), (4, 3), (4, 2)]:
        assert len(enumerate_orbits(k, m, False)) == dim_invariants(k, m)


def test_enumerate_orbits_sorted_and_canonical():
    keys = enumerate_orbits(3, 3, False)
    assert keys == sorted(keys)
    assert all(orbit_key(key.tuple) == key for key in keys)
    assert len(set(keys)) == len(keys)


def test_enumerate_orbits_workers_give_same_result():
    assert enumerate_orbits(3, 4, True, jobs=2) == enumerate_orbits(3, 4, True)


def test_enumerate_orbits_budget_and_k():
    with pytest.raises(BudgetExceededError):
        enumerate_orbits(3, 5, False, budget=1000)
    with pytest.raises(PermutationError):
        enumerate_orbits(1, 2, False)


def test_class_count_and_enumeration_cost():
    assert [class_count(m) for m in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]
    assert class_count(0) == 1
    assert enumeration_cost(4, 2) == 5 * 24 * 2 * 16
    assert enumeration_cost(3, 1) == 3 * 1 * 1 * 9


def test_enumeration_budget_default_allows_desk_scale_only():
    assert enumeration_cost(6, 2) <= 5000000
    assert enumeration_cost(4, 3) <= 5000000
    with pytest.raises(BudgetExceededError):
        enumerate_orbits(4, 6, False)
    with pytest.raises(BudgetExceededError):
        enumerate_orbits(3, 7, True)


def test_covering_graph():
    graph = to_covering_graph(T((1,), (1,), (1,)))
    assert graph.num_vertices == 1
    assert graph.edges == [(1, 1, 1), (1, 1, 2), (1, 1, 3)]

    graph = to_covering_graph(T((2, 1)))
    assert sorted(graph.edges) == [(1, 2, 1), (2, 1, 1)]
    assert graph.check_degrees()
    assert 'label="c1"' in graph.to_dot()


def test_covering_graph_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(10):
        t = random_perm_tuple(4, 3, rng)
        graph = to_covering_graph(t)
        assert graph.to_perm_tuple() == t
        assert graph.is_connected() == is_connected(t)


def test_covering_graph_degree_violation():
    graph = CoveringGraph(2, [(1, 2, 1), (2, 2, 1)])
    assert not graph.check_degrees()
    with pytest.raises(PermutationError):
        graph.to_perm_tuple()


def test_orbit_json():
    t = T((2, 1, 3), (1, 2, 3))
    data = perm_tuple_to_json(t, 3)
    assert data == {"k": 3, "m": 3, "perms": [[2, 1, 3], [1, 2, 3]]}
    assert perm_tuple_from_json(data) == (3, t)
    with pytest.raises(PermutationError):
        perm_tuple_from_json({"k": 3, "m": 2, "perms": [[2, 1, 3], [1, 2, 3]]})


@pytest.mark.parametrize("data", [
    {"k": "x", "m": 2, "perms": [[2, 1], [1, 2]]},
    {"k": 1, "m": 1, "perms": [[1]]},
    {"k": True, "m": 1, "perms": [[1]]},
    {"k": 3, "m": 2, "perms": [[1.5, 2], [1, 2]]},
    {"k": 3, "m": 2},
    {"k": 3, "m": 2, "perms": 7},
    [[2, 1], [1, 2]],
])
def test_orbit_json_rejects_malformed_input(data):
    with pytest.raises(PermutationError):
        perm_tuple_from_json(data)
