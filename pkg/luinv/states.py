"""
Dense pure and mixed states of k-partite systems.

Coefficients are stored as numpy arrays whose axes are the parties, in row-major order
(the last party's index varies fastest when flattened). A mixed state of k parties is a
2k-axis array: k row axes followed by k column axes.
"""
import json

import numpy as np

from loggerConfig import log_manager


class ShapeMismatchError(ValueError):
    """A state, matrix or orbit does not fit the system shape it is used with."""


class SystemShape(object):
    def __init__(self, dims):
        """
        Local dimensions of a k-partite system.

        Parameters:
        - dims (sequence of int): n_1..n_k, all positive.
        """
        dims = tuple(int(n) for n in dims)
        if len(dims) < 1 or min(dims) < 1:
            raise ShapeMismatchError(f"Local dimensions must be positive, got {list(dims)}")
        self.dims = dims
        self.k = len(dims)

    @classmethod
    def parse(cls, text):
        """Parse a comma separated list such as "3,3,3"."""
        try:
            return cls([int(part) for part in text.split(",")])
        except ValueError:
            raise ShapeMismatchError(f"Cannot parse shape {text!r}")

    @property
    def size(self):
        return int(np.prod(self.dims))

    def covers(self, other):
        """True iff every local dimension is at least the one of other (same k)."""
        return self.k == other.k and all(a >= b for a, b in zip(self.dims, other.dims))

    def drop_last(self):
        return SystemShape(self.dims[:-1])

    def __eq__(self, other):
        return isinstance(other, SystemShape) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    def __repr__(self):
        return f"SystemShape({list(self.dims)})"


class PureState(object):
    def __init__(self, shape, coeffs):
        """
        Parameters:
        - shape (SystemShape): The system.
        - coeffs (array-like): prod(n_j) complex numbers, flat row-major or already shaped.
        """
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.size != shape.size:
            raise ShapeMismatchError(f"{coeffs.size} coefficients do not fit shape {list(shape.dims)}")
        self.shape = shape
        self.coeffs = coeffs.reshape(shape.dims)
        self.coeffs.setflags(write=False)

    @property
    def vector(self):
        return self.coeffs.reshape(-1)

    def norm(self):
        return float(np.linalg.norm(self.vector))

    def normalized(self):
        return PureState(self.shape, self.coeffs / self.norm())

    def __repr__(self):
        return f"PureState({list(self.shape.dims)})"


class MixedState(object):
    def __init__(self, shape, coeffs):
        """
        Parameters:
        - shape (SystemShape): The system.
        - coeffs (array-like): prod(n_j)^2 complex numbers indexed by (row multi-index, column multi-index).
        """
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.size != shape.size ** 2:
            raise ShapeMismatchError(f"{coeffs.size} coefficients do not fit a density matrix on {list(shape.dims)}")
        self.shape = shape
        self.coeffs = coeffs.reshape(shape.dims + shape.dims)
        self.coeffs.setflags(write=False)

    @property
    def matrix(self):
        return self.coeffs.reshape(self.shape.size, self.shape.size)

    def trace(self):
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tol=1e-12):
        return bool(np.allclose(self.matrix, self.matrix.conj().T, rtol=0, atol=tol))

    def __repr__(self):
        return f"MixedState({list(self.shape.dims)})"


def _complex_gaussian(rng, size):
    # standard complex Gaussian: E|z|^2 = 1
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def random_pure(shape, seed, normalize=True):
    """
    Draw a state with i.i.d. standard complex Gaussian coefficients.

    Parameters:
    - shape (SystemShape): The system.
    - seed (int): Seed of a fresh numpy Generator; equal seeds give equal states.
    - normalize (bool): Scale to unit norm.

    Returns:
    - PureState: The drawn state.
    """
    rng = np.random.default_rng(seed)
    psi = PureState(shape, _complex_gaussian(rng, shape.size))
    return psi.normalized() if normalize else psi


def random_local_unitary(shape, seed):
    """
    Draw one Haar random unitary per party: QR decomposition of a complex Gaussian matrix,
    with the phases of R's diagonal moved into Q.

    Returns:
    - list: k numpy arrays, the j-th of size n_j x n_j.
    """
    rng = np.random.default_rng(seed)
    unitaries = []
    for n in shape.dims:
        z = _complex_gaussian(rng, (n, n))
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        unitaries.append(q * (d / np.abs(d)))
    return unitaries


def apply_local_unitary(psi, unitaries):
    """
    Apply U_1 x ... x U_k to a pure state.
    """
    if len(unitaries) != psi.shape.k:
        raise ShapeMismatchError(f"Expected {psi.shape.k} local matrices, got {len(unitaries)}")
    coeffs = psi.coeffs
    for axis, (u, n) in enumerate(zip(unitaries, psi.shape.dims)):
        u = np.asarray(u, dtype=np.complex128)
        if u.shape != (n, n):
            raise ShapeMismatchError(f"Party {axis + 1} has dimension {n}, got a {u.shape} matrix")
        coeffs = np.moveaxis(np.tensordot(u, coeffs, axes=([1], [axis])), 0, axis)
    return PureState(psi.shape, coeffs)


def embed(psi, shape2):
    """
    Embed a state into a larger system by zero padding, each local basis vector e_i
    being sent to e_i of the bigger space.
    """
    if not shape2.covers(psi.shape):
        raise ShapeMismatchError(f"Cannot embed {list(psi.shape.dims)} into {list(shape2.dims)}")
    coeffs = np.zeros(shape2.dims, dtype=np.complex128)
    coeffs[tuple(slice(0, n) for n in psi.shape.dims)] = psi.coeffs
    return PureState(shape2, coeffs)


def reduce_last(psi):
    """
    Reduced density matrix obtained by tracing out the last party,
    rho[(i), (j)] = sum_c psi[i, c] * conj(psi[j, c]).
    """
    if psi.shape.k < 2:
        raise ShapeMismatchError("Tracing out the last party needs at least two parties")
    last = psi.shape.k - 1
    rho = np.tensordot(psi.coeffs, np.conjugate(psi.coeffs), axes=([last], [last]))
    return MixedState(psi.shape.drop_last(), rho)


def ghz_state(shape):
    """(1/sqrt(d)) sum_i e_i x ... x e_i with d the smallest local dimension."""
    d = min(shape.dims)
    coeffs = np.zeros(shape.dims, dtype=np.complex128)
    for i in range(d):
        coeffs[(i,) * shape.k] = 1 / np.sqrt(d)
    return PureState(shape, coeffs)


def state_to_json(state):
    """
    State file layout: {"dims": [...], "coeffs": [[re, im], ...]} in row-major order;
    mixed states add "kind": "mixed" and list (prod n_j)^2 coefficients.
    """
    flat = state.coeffs.reshape(-1)
    data = {"dims": list(state.shape.dims), "coeffs": [[float(z.real), float(z.imag)] for z in flat]}
    if isinstance(state, MixedState):
        data["kind"] = "mixed"
    return data


def state_from_json(data):
    try:
        shape = SystemShape(data["dims"])
        coeffs = np.array([complex(re, im) for re, im in data["coeffs"]], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as error:
        raise ShapeMismatchError(f"Malformed state file: {error}")
    if data.get("kind", "pure") == "mixed":
        return MixedState(shape, coeffs)
    return PureState(shape, coeffs)


def load_state(path):
    with open(path) as file:
        state = state_from_json(json.load(file))
    log_manager.main_logger.info(f"Loaded {state} from {path}")
    return state


def save_state(state, path):
    with open(path, "w") as file:
        json.dump(state_to_json(state), file)
