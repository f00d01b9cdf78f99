import os

import numpy as np
import pytest

from states import (MixedState, PureState, ShapeMismatchError, SystemShape, apply_local_unitary, embed, ghz_state,
                    load_state, random_local_unitary, random_pure, reduce_last, save_state, state_from_json,
                    state_to_json)

INPUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'input')


def test_system_shape():
    shape = SystemShape.parse("3,3,2")
    assert shape.dims == (3, 3, 2)
    assert shape.k == 3
    assert shape.size == 18
    assert shape.drop_last() == SystemShape([3, 3])
    assert SystemShape([4, 3, 2]).covers(shape)
    assert not SystemShape([2, 3, 2]).covers(shape)
    with pytest.raises(ShapeMismatchError):
        SystemShape.parse("3,x")
    with pytest.raises(ShapeMismatchError):
        SystemShape([2, 0])


def test_pure_state_shape_check():
    with pytest.raises(ShapeMismatchError):
        PureState(SystemShape([2, 2]), np.ones(3))


def test_random_pure():
    shape = SystemShape([2, 2, 2])
    psi = random_pure(shape, 17)
    assert psi.vector.shape == (8,)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(psi.coeffs, random_pure(shape, 17).coeffs)
    assert not np.array_equal(psi.coeffs, random_pure(shape, 18).coeffs)
    assert random_pure(shape, 17, normalize=False).norm() != pytest.approx(1.0, abs=1e-12)


def test_random_local_unitary_is_unitary():
    shape = SystemShape([1, 2, 3, 4])
    unitaries = random_local_unitary(shape, 5)
    assert [u.shape for u in unitaries] == [(1, 1), (2, 2), (3, 3), (4, 4)]
    for u in unitaries:
        assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-12
    assert abs(abs(unitaries[0][0, 0]) - 1) < 1e-12
    for a, b in zip(unitaries, random_local_unitary(shape, 5)):
        assert np.array_equal(a, b)


def test_apply_local_unitary():
    shape = SystemShape([2, 3, 2])
    psi = random_pure(shape, 1)
    identities = [np.eye(n) for n in shape.dims]
    assert np.allclose(apply_local_unitary(psi, identities).coeffs, psi.coeffs, rtol=0, atol=1e-15)

    unitaries = random_local_unitary(shape, 2)
    moved = apply_local_unitary(psi, unitaries)
    assert moved.norm() == pytest.approx(psi.norm(), abs=1e-12)
    back = apply_local_unitary(moved, [u.conj().T for u in unitaries])
    assert np.allclose(back.coeffs, psi.coeffs, rtol=0, atol=1e-12)

    with pytest.raises(ShapeMismatchError):
        apply_local_unitary(psi, identities[:2])
    with pytest.raises(ShapeMismatchError):
        apply_local_unitary(psi, [np.eye(3)] * 3)


def test_apply_local_unitary_matches_kronecker():
    shape = SystemShape([2, 3])
    psi = random_pure(shape, 9)
    u1, u2 = random_local_unitary(shape, 10)
    moved = apply_local_unitary(psi, [u1, u2])
    assert np.allclose(moved.vector, np.kron(u1, u2) @ psi.vector, rtol=0, atol=1e-12)


def test_embed():
    shape = SystemShape([2, 2])
    psi = random_pure(shape, 4)
    assert np.array_equal(embed(psi, shape).coeffs, psi.coeffs)

    bigger = embed(psi, SystemShape([3, 4]))
    assert bigger.norm() == pytest.approx(psi.norm(), abs=1e-14)
    assert bigger.coeffs[1, 1] == psi.coeffs[1, 1]
    assert bigger.coeffs[2, 3] == 0

    via_middle = embed(embed(psi, SystemShape([3, 3])), SystemShape([3, 4]))
    assert np.array_equal(via_middle.coeffs, bigger.coeffs)

    with pytest.raises(ShapeMismatchError):
        embed(psi, SystemShape([1, 4]))


def test_reduce_last_product_state():
    psi = PureState(SystemShape([2, 2]), [1, 0, 0, 0])
    rho = reduce_last(psi)
    assert np.allclose(rho.matrix, np.diag([1, 0]))


def test_reduce_last_bell_state():
    rho = reduce_last(ghz_state(SystemShape([2, 2])))
    assert np.allclose(rho.matrix, np.eye(2) / 2, rtol=0, atol=1e-15)


def test_reduce_last_properties():
    psi = random_pure(SystemShape([2, 3, 2]), 6, normalize=False)
    rho = reduce_last(psi)
    assert rho.shape == SystemShape([2, 3])
    assert rho.coeffs.shape == (2, 3, 2, 3)
    assert rho.trace() == pytest.approx(psi.norm() ** 2, abs=1e-12)
    assert rho.is_hermitian()
    assert np.min(np.linalg.eigvalsh(rho.matrix)) > -1e-12
    with pytest.raises(ShapeMismatchError):
        reduce_last(PureState(SystemShape([3]), [1, 0, 0]))


def test_ghz_state():
    psi = ghz_state(SystemShape([3, 2, 2]))
    assert psi.norm() == pytest.approx(1.0)
    assert psi.coeffs[1, 1, 1] == pytest.approx(1 / np.sqrt(2))
    assert psi.coeffs[2, 1, 1] == 0


def test_state_json(tmp_path):
    psi = random_pure(SystemShape([2, 3]), 8)
    data = state_to_json(psi)
    assert data["dims"] == [2, 3]
    assert len(data["coeffs"]) == 6
    assert np.array_equal(state_from_json(data).coeffs, psi.coeffs)

    rho = reduce_last(random_pure(SystemShape([2, 2, 2]), 3))
    path = tmp_path / "rho.json"
    save_state(rho, str(path))
    loaded = load_state(str(path))
    assert isinstance(loaded, MixedState)
    assert np.array_equal(loaded.coeffs, rho.coeffs)

    with pytest.raises(ShapeMismatchError):
        state_from_json({"dims": [2, 2]})


def test_load_state_files():
    ghz = load_state(os.path.join(INPUT_DIR, "ghz3.json"))
    assert isinstance(ghz, PureState)
    assert np.allclose(ghz.coeffs, ghz_state(SystemShape([2, 2, 2])).coeffs, rtol=0, atol=1e-15)
    bell = load_state(os.path.join(INPUT_DIR, "bell2.json"))
    assert bell.shape == SystemShape([2, 2])
