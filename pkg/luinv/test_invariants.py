import numpy as np
import pytest

from invariants import (MIXED, PURE, InvariantSpec, degree_label, eval_mixed, eval_product, eval_pure,
                        eval_tuple_mixed, eval_tuple_pure, evaluate, factorize_invariant, generators,
                        mixed_generators, orbit_specs, spec_from_json)
from permCore import BudgetExceededError, Permutation, PermTuple, conjugate, orbit_key, random_perm_tuple, star
from states import (MixedState, ShapeMismatchError, SystemShape, apply_local_unitary, embed, ghz_state,
                    random_local_unitary, random_pure, reduce_last)


def pure_spec(*perms):
    return InvariantSpec(PURE, orbit_key(PermTuple([list(p) for p in perms])))


def test_degree_one_is_squared_norm():
    psi = random_pure(SystemShape([2, 3, 2]), 1, normalize=False)
    value = eval_pure(pure_spec((1,), (1,)), psi)
    assert value.real == pytest.approx(psi.norm() ** 2, rel=1e-12)
    assert abs(value.imag) < 1e-12


def test_bell_state_purity():
    bell = ghz_state(SystemShape([2, 2]))
    assert eval_pure(pure_spec((2, 1)), bell) == pytest.approx(0.5, abs=1e-12)


def test_ghz_state_values():
    ghz = ghz_state(SystemShape([2, 2, 2]))
    assert eval_pure(pure_spec((2, 1), (2, 1)), ghz) == pytest.approx(0.5, abs=1e-12)
    assert eval_pure(pure_spec((2, 1), (1, 2)), ghz) == pytest.approx(0.5, abs=1e-12)
    assert eval_pure(pure_spec((1, 2), (2, 1)), ghz) == pytest.approx(0.5, abs=1e-12)


def test_mixed_invariants_of_maximally_mixed_state():
    rho = MixedState(SystemShape([2, 2]), np.eye(4) / 4)
    identity = InvariantSpec(MIXED, orbit_key(PermTuple([[1], [1]])))
    assert eval_mixed(identity, rho) == pytest.approx(1.0)
    swap = InvariantSpec(MIXED, orbit_key(PermTuple([[2, 1], [2, 1]])))
    assert eval_mixed(swap, rho) == pytest.approx(0.25)


def test_two_party_cycles_are_power_traces():
    shape = SystemShape([4, 4])
    for seed in range(5):
        psi = random_pure(shape, seed)
        rho = reduce_last(psi).matrix
        for m in range(1, 5):
            cycle = Permutation.from_zero_based([(l + 1) % m for l in range(m)])
            value = eval_tuple_pure(PermTuple([cycle]), psi)
            expected = np.trace(np.linalg.matrix_power(rho, m))
            assert abs(value - expected) < 1e-12


def test_representative_independence():
    rng = np.random.default_rng(4)
    psi = random_pure(SystemShape([2, 2, 2]), 3)
    for _ in range(5):
        t = random_perm_tuple(3, 2, rng)
        pi = Permutation.from_zero_based(rng.permutation(3).tolist())
        assert abs(eval_tuple_pure(t, psi) - eval_tuple_pure(conjugate(t, pi), psi)) < 1e-13


def test_local_unitary_invariance():
    shape = SystemShape([2, 3, 2])
    psi = random_pure(shape, 12)
    rotated = apply_local_unitary(psi, random_local_unitary(shape, 13))
    for spec in orbit_specs(3, 3):
        a, b = eval_pure(spec, psi), eval_pure(spec, rotated)
        assert abs(a - b) / (1 + abs(b)) < 1e-10


def test_multiplicativity():
    psi = random_pure(SystemShape([3, 3, 3]), 21)
    s = PermTuple([[2, 1], [1, 2]])
    t = PermTuple([[2, 3, 1], [1, 3, 2]])
    joined = eval_tuple_pure(star(s, t), psi)
    assert abs(joined - eval_tuple_pure(s, psi) * eval_tuple_pure(t, psi)) < 1e-12


def test_conjugation_symmetry():
    psi = random_pure(SystemShape([3, 3, 3]), 5)
    t = PermTuple([[2, 3, 1], [1, 3, 2]])
    assert abs(np.conjugate(eval_tuple_pure(t, psi)) - eval_tuple_pure(t.inverse(), psi)) < 1e-13


def test_padding_invariance():
    psi = random_pure(SystemShape([2, 2, 2]), 8)
    padded = embed(psi, SystemShape([3, 4, 3]))
    for spec in orbit_specs(3, 2):
        assert abs(eval_pure(spec, psi) - eval_pure(spec, padded)) < 1e-13


def test_bridge_to_mixed_form():
    psi = random_pure(SystemShape([2, 3, 2]), 30)
    rho = reduce_last(psi)
    for spec in orbit_specs(3, 3):
        assert eval_tuple_mixed(spec.orbit.tuple, rho) == eval_pure(spec, psi)
        assert evaluate(spec, psi) == eval_pure(spec, psi)


def test_generators():
    assert [g.degree for g in generators(2, 5)] == [1, 2, 3, 4, 5]
    assert len(generators(3, 2)) == 4
    assert len(generators(3, 4)) == 37
    assert all(g.orbit.is_connected and g.kind == PURE for g in generators(3, 3))
    assert len(mixed_generators(2, 2)) == 4
    assert all(g.parties == 2 for g in mixed_generators(2, 2))
    assert len(generators(3, 4, min_m=4)) == 26
    assert [g.degree for g in mixed_generators(2, 2, min_m=2)] == [2, 2, 2]


def test_orbit_specs_kinds():
    pure = orbit_specs(3, 2)
    assert len(pure) == 4 and all(s.kind == PURE and s.orbit.arity == 2 for s in pure)
    mixed = orbit_specs(3, 2, kind=MIXED)
    assert len(mixed) == 8
    assert all(s.kind == MIXED and s.parties == 3 for s in mixed)
    assert len(orbit_specs(3, 2, kind=MIXED, connected_only=True)) == 7


def test_factorize_invariant():
    connected = orbit_key(PermTuple([[2, 3, 1], [1, 3, 2]]))
    assert factorize_invariant(connected) == [connected]

    unit = orbit_key(PermTuple([[1], [1]]))
    assert factorize_invariant(orbit_key(PermTuple.identity(3, 2))) == [unit] * 3

    split = orbit_key(PermTuple([[2, 1, 3], [1, 2, 3]]))
    factors = factorize_invariant(split)
    assert factors == [unit, orbit_key(PermTuple([[2, 1], [1, 2]]))]

    psi = random_pure(SystemShape([2, 2, 2]), 2, normalize=False)
    assert abs(eval_product(factors, psi) - eval_tuple_pure(split.tuple, psi)) < 1e-12
    assert eval_product([], psi) == 1


def test_budget_exceeded():
    psi = random_pure(SystemShape([2, 2, 2]), 0)
    with pytest.raises(BudgetExceededError):
        eval_pure(pure_spec((2, 1), (2, 1)), psi, budget=10)


def test_shape_mismatch():
    psi = random_pure(SystemShape([2, 2, 2]), 0)
    with pytest.raises(ShapeMismatchError):
        eval_pure(pure_spec((2, 1)), psi)
    with pytest.raises(ShapeMismatchError):
        eval_mixed(pure_spec((2, 1), (2, 1)), reduce_last(psi))
    with pytest.raises(ShapeMismatchError):
        spec_from_json({"k": 3, "m": 2, "perms": [[2, 1]]})


def test_spec_json():
    spec = spec_from_json({"k": 3, "m": 3, "perms": [[1, 3, 2], [1, 2, 3]]})
    assert spec.kind == PURE
    assert spec.parties == 3
    assert spec.to_json() == {"k": 3, "m": 3, "perms": [[2, 1, 3], [1, 2, 3]], "kind": PURE}
    mixed = spec_from_json({"k": 2, "m": 2, "perms": [[2, 1], [2, 1]], "kind": MIXED})
    assert mixed.parties == 2
    with pytest.raises(ValueError):
        InvariantSpec("other", spec.orbit)


def test_degree_label():
    assert degree_label(3) == 3
    assert degree_label(3, full_degree=True) == 6
