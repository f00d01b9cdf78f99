"""
Numerical evaluation of the LU-invariant polynomials attached to orbits of permutation
tuples, the generating set given by connected orbits, and factorization into generators.

For a pure state psi of k parties and a (k-1)-tuple sigma of permutations of {1..m},

    f(psi) = sum over i^l_j of  prod_l psi[i^l_1..i^l_k] * conj(psi[i^sigma_1(l)_1 .. i^sigma_{k-1}(l)_{k-1}, i^l_k])

Summing out the last party first turns every pair of factors into an entry of the reduced
density matrix rho, so f(psi) equals the mixed-state invariant of rho with the same tuple:

    f(rho) = sum over i^l_j of  prod_l rho[(i^l_1..i^l_p), (i^sigma_1(l)_1 .. i^sigma_p(l)_p)]

which is evaluated as a single einsum over m copies of rho.
"""
import numpy as np

from appConfig import app_config
from loggerConfig import log_manager
from permCore import (BudgetExceededError, PermutationError, components, enumerate_orbits,
                      orbit_key, perm_tuple_from_json, perm_tuple_to_json)
from states import ShapeMismatchError, reduce_last

PURE = "pure"
MIXED = "mixed"

# einsum accepts at most 52 distinct index labels
MAX_EINSUM_LABELS = 52


class InvariantSpec(object):
    def __init__(self, kind, orbit):
        """
        An invariant polynomial: the orbit that defines it and the kind of state it is evaluated on.

        Parameters:
        - kind (str): "pure" (orbit arity k-1) or "mixed" (orbit arity k).
        - orbit (OrbitKey): Canonical orbit of the defining tuple.
        """
        if kind not in (PURE, MIXED):
            raise ValueError(f"Unknown invariant kind {kind!r}, choose from pure, mixed")
        self.kind = kind
        self.orbit = orbit
        self.degree = orbit.m

    @property
    def parties(self):
        """Number of parties of the states the invariant is evaluated on."""
        return self.orbit.arity + 1 if self.kind == PURE else self.orbit.arity

    def to_json(self):
        data = perm_tuple_to_json(self.orbit.tuple, self.parties)
        data["kind"] = self.kind
        return data

    def __eq__(self, other):
        return isinstance(other, InvariantSpec) and (self.kind, self.orbit) == (other.kind, other.orbit)

    def __hash__(self):
        return hash((self.kind, self.orbit))

    def __repr__(self):
        return f"InvariantSpec({self.kind}, {self.orbit.tuple.to_lists()})"


def spec_from_json(data, kind=None):
    """
    Parse orbit JSON, optionally carrying "kind"; a pure orbit has k-1 slots, a mixed one k.
    """
    k, t = perm_tuple_from_json(data)
    kind = kind or data.get("kind", PURE)
    if kind not in (PURE, MIXED):
        raise PermutationError(f"Unknown invariant kind {kind!r}, choose from pure, mixed")
    expected = k - 1 if kind == PURE else k
    if t.arity != expected:
        raise ShapeMismatchError(f"A {kind} invariant for k={k} needs {expected} permutations, got {t.arity}")
    return InvariantSpec(kind, orbit_key(t))


def degree_label(m, full_degree=False):
    """Degree as reported: m, or 2m when counting coefficients and conjugates together."""
    return 2 * m if full_degree else m


def _contract(rho_coeffs, t, budget):
    """
    Evaluate the mixed-form sum for tuple t on a p-party density tensor (2p axes).
    Index variable (copy l, party j) gets label l*p + j; copy l uses it as row index j,
    and copy sigma_j^-1(l) uses it as column index j.
    """
    p = t.arity
    dims = rho_coeffs.shape[:p]
    terms = int(np.prod(dims)) ** t.m
    if terms > budget:
        log_manager.main_logger.error(f"Contraction with {terms} terms exceeds budget {budget}")
        raise BudgetExceededError(f"Evaluating a degree-{t.m} invariant on {list(dims)} needs {terms} terms, budget is {budget}")
    if t.m * p > MAX_EINSUM_LABELS:
        raise BudgetExceededError(f"Degree {t.m} with {p} parties needs {t.m * p} index labels, at most {MAX_EINSUM_LABELS} supported")

    operands = []
    for l in range(t.m):
        rows = [l * p + j for j in range(p)]
        cols = [t.maps[j][l] * p + j for j in range(p)]
        operands.extend([rho_coeffs, rows + cols])
    operands.append([])
    return complex(np.einsum(*operands, optimize=True))


def eval_tuple_mixed(t, rho, budget=None):
    """Mixed-state invariant of any representative tuple t (arity = number of parties of rho)."""
    if rho.shape.k != t.arity:
        raise ShapeMismatchError(f"A {t.arity}-slot tuple needs a {t.arity}-party mixed state, got {rho.shape.k} parties")
    budget = app_config.CONTRACTION_BUDGET if budget is None else budget
    return _contract(rho.coeffs, t, budget)


def eval_tuple_pure(t, psi, budget=None):
    """Pure-state invariant of any representative tuple t (arity = parties of psi minus one)."""
    if psi.shape.k != t.arity + 1:
        raise ShapeMismatchError(f"A {t.arity}-slot tuple needs a {t.arity + 1}-party pure state, got {psi.shape.k} parties")
    return eval_tuple_mixed(t, reduce_last(psi), budget)


def eval_pure(spec, psi, budget=None):
    """
    Value of a pure-kind invariant on a pure state.

    Parameters:
    - spec (InvariantSpec): Invariant of kind "pure".
    - psi (PureState): State with spec.parties parties.
    - budget (int): Cap on the number of index assignments.

    Returns:
    - complex: The invariant value.
    """
    if spec.kind != PURE:
        raise ShapeMismatchError("eval_pure needs a pure-kind invariant")
    return eval_tuple_pure(spec.orbit.tuple, psi, budget)


def eval_mixed(spec, rho, budget=None):
    """
    Value of a mixed-kind invariant on a mixed state.
    """
    if spec.kind != MIXED:
        raise ShapeMismatchError("eval_mixed needs a mixed-kind invariant")
    return eval_tuple_mixed(spec.orbit.tuple, rho, budget)


def evaluate(spec, state, budget=None):
    """Dispatch on the kind of the invariant."""
    if spec.kind == PURE:
        return eval_pure(spec, state, budget)
    return eval_mixed(spec, state, budget)


def generators(k, max_m, budget=None, jobs=1, min_m=1):
    """
    The algebraically independent generating set in degrees min_m..max_m: one pure-kind
    invariant per connected orbit of (k-1)-tuples, sorted by degree and then canonical order.
    """
    specs = []
    for m in range(min_m, max_m + 1):
        specs.extend(InvariantSpec(PURE, key) for key in enumerate_orbits(k, m, True, budget=budget, jobs=jobs))
    log_manager.main_logger.info(f"{len(specs)} generators for k={k} up to degree {max_m}")
    return specs


def mixed_generators(k, max_m, budget=None, jobs=1, min_m=1):
    """
    Generating set of mixed-state invariants of k parties: connected orbits of k-tuples.
    """
    specs = []
    for m in range(min_m, max_m + 1):
        specs.extend(orbit_specs(k, m, budget, jobs, kind=MIXED, connected_only=True))
    log_manager.main_logger.info(f"{len(specs)} mixed generators for k={k} up to degree {max_m}")
    return specs


def factorize_invariant(orbit):
    """
    Write the invariant of an orbit as a product of generators: the connected components
    of the covering, as a sorted multiset of OrbitKeys.
    """
    return components(orbit.tuple)


def eval_product(factors, psi, budget=None):
    """Product of the pure invariants of a multiset of orbits; the empty product is 1."""
    value = complex(1.0)
    for key in factors:
        value *= eval_tuple_pure(key.tuple, psi, budget)
    return value


def orbit_specs(k, m, budget=None, jobs=1, kind=PURE, connected_only=False):
    """
    Invariants of every degree-m orbit (a basis of the degree-m part). Pure invariants of
    k parties come from (k-1)-tuples, mixed ones from k-tuples.
    """
    if kind == MIXED:
        keys = enumerate_orbits(k + 1, m, connected_only, budget=budget, jobs=jobs, arity=k)
    else:
        keys = enumerate_orbits(k, m, connected_only, budget=budget, jobs=jobs)
    return [InvariantSpec(kind, key) for key in keys]
