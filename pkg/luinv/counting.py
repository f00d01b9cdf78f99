"""
Partition combinatorics, graded dimensions of the invariant algebra and the counts of
connected coverings, obtained by inverting the Euler product of the Hilbert series.
All arithmetic is exact (Python integers).
"""
import math
from dataclasses import dataclass, field

import pandas as pd

from appConfig import app_config
from loggerConfig import log_manager
from permCore import enumerate_orbits, enumeration_cost


class InconsistencyError(ValueError):
    """Two independent ways of computing the same count disagree."""


class Partition(object):
    def __init__(self, m, multiplicities):
        """
        Partition of m in multiplicity form.

        Parameters:
        - m (int): The partitioned integer.
        - multiplicities (sequence of int): a_1..a_m, a_i = number of parts equal to i.
        """
        multiplicities = tuple(int(a) for a in multiplicities)
        multiplicities = multiplicities + (0,) * (m - len(multiplicities))
        if sum(i * a for i, a in enumerate(multiplicities, start=1)) != m or min(multiplicities, default=0) < 0:
            raise ValueError(f"{multiplicities} is not a partition of {m}")
        self.m = m
        self.multiplicities = multiplicities

    @classmethod
    def from_parts(cls, parts):
        m = sum(parts)
        multiplicities = [0] * m
        for part in parts:
            multiplicities[part - 1] += 1
        return cls(m, multiplicities)

    def parts(self):
        """Parts in decreasing order."""
        return tuple(i for i in range(self.m, 0, -1) for _ in range(self.multiplicities[i - 1]))

    def __eq__(self, other):
        return isinstance(other, Partition) and self.multiplicities == other.multiplicities

    def __hash__(self):
        return hash(self.multiplicities)

    def __repr__(self):
        return f"Partition({list(self.parts())})"


def partitions(m):
    """
    All partitions of m, ordered by decreasing largest part and then lexicographically
    decreasing on the remaining parts: [m], [m-1, 1], ..., [1, ..., 1].
    """
    def descend(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in descend(remaining - part, part):
                yield (part,) + rest

    return [Partition.from_parts(parts) for parts in descend(m, m)]


def centralizer_order(a):
    """
    Order of the centralizer of a permutation of cycle type a: prod_i i^(a_i) * a_i!.
    """
    order = 1
    for i, a_i in enumerate(a.multiplicities, start=1):
        order *= i ** a_i * math.factorial(a_i)
    return order


def dim_invariants(k, m):
    """
    Dimension of the degree-m homogeneous part of the algebra of LU invariants of
    k-partite systems, sum over partitions a of m of centralizer_order(a)^(k-2).
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    return sum(centralizer_order(a) ** (k - 2) for a in partitions(m))


class IntSeries(object):
    def __init__(self, coeffs, order=None):
        """
        Integer power series truncated at a fixed order.

        Parameters:
        - coeffs (sequence of int): Coefficients, constant term first.
        - order (int): Truncation degree M; defaults to len(coeffs) - 1.
        """
        order = len(coeffs) - 1 if order is None else order
        coeffs = [int(c) for c in coeffs[:order + 1]]
        self.order = order
        self.coeffs = coeffs + [0] * (order + 1 - len(coeffs))

    @classmethod
    def one(cls, order):
        return cls([1], order)

    def __getitem__(self, degree):
        return self.coeffs[degree]

    def __mul__(self, other):
        order = min(self.order, other.order)
        product = [0] * (order + 1)
        for i, a in enumerate(self.coeffs[:order + 1]):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[:order + 1 - i]):
                product[i + j] += a * b
        return IntSeries(product, order)

    def __eq__(self, other):
        return isinstance(other, IntSeries) and self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        return f"IntSeries({self.coeffs})"


def _euler_factor(d, exponent, order):
    """(1 - t^d)^(-exponent) = sum_j C(exponent + j - 1, j) t^(d j), truncated."""
    coeffs = [0] * (order + 1)
    for j in range(order // d + 1):
        coeffs[d * j] = math.comb(exponent + j - 1, j) if exponent > 0 else int(j == 0)
    return IntSeries(coeffs, order)


def euler_product(u, M):
    """
    Expand prod_{d >= 1} (1 - t^d)^(-u_d) up to t^M.

    Parameters:
    - u (sequence of int): u_1, u_2, ... ; missing entries count as zero.
    - M (int): Truncation order.

    Returns:
    - IntSeries: The expanded product.
    """
    series = IntSeries.one(M)
    for d, exponent in enumerate(u[:M], start=1):
        if exponent < 0:
            raise ValueError(f"Euler product exponents must be non-negative, u_{d} = {exponent}")
        if exponent:
            series = series * _euler_factor(d, exponent, M)
    return series


def hilbert_series(k, M):
    """1 + sum_m d_{k,m} t^m up to t^M."""
    return IntSeries([1] + [dim_invariants(k, m) for m in range(1, M + 1)], M)


@dataclass
class CountTable:
    k: int
    max_m: int
    dims: list
    connected: list
    enumerated: list = field(default_factory=list)  # degrees whose connected count was confirmed by enumeration
    euler_ok: bool = False

    def to_json(self):
        return {
            "k": self.k,
            "dims": list(self.dims),
            "connected": list(self.connected),
            "enumerated": list(self.enumerated),
            "euler_ok": self.euler_ok,
        }

    def to_frame(self, full_degree=False):
        degrees = list(range(1, self.max_m + 1))
        return pd.DataFrame({
            "degree": [2 * m for m in degrees] if full_degree else degrees,
            "dim": self.dims,
            "connected": self.connected,
            "enumerated": [m in self.enumerated for m in degrees],
        })

    def to_csv(self, path_or_buffer=None, full_degree=False):
        return self.to_frame(full_degree).to_csv(path_or_buffer, index=False)


def connected_counts(k, max_m, budget=None, jobs=1, cross_check=True):
    """
    Counts u_1..u_max_m of connected coverings of the bouquet with k-1 loops (equivalently
    conjugacy classes of index-d subgroups of the free group of rank k-1), obtained from the
    graded dimensions by inverting the Euler product order by order.

    Parameters:
    - k (int): Number of parties, k >= 2.
    - max_m (int): Largest degree.
    - budget (int): Enumeration budget for the cross-check by direct enumeration.
    - jobs (int): Worker processes for the enumeration leg.
    - cross_check (bool): Confirm u_d by enumerating transitive tuples when affordable.

    Returns:
    - CountTable: Dimensions, connected counts and cross-check status.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    budget = app_config.ENUMERATION_BUDGET if budget is None else budget
    log_manager.main_logger.info(f"Counting connected coverings for k={k} up to degree {max_m}")

    hilbert = hilbert_series(k, max_m)
    dims = hilbert.coeffs[1:]
    connected = []
    running = IntSeries.one(max_m)  # product of the factors found so far
    for n in range(1, max_m + 1):
        u_n = dims[n - 1] - running[n]
        if u_n < 0:
            log_manager.main_logger.error(f"Negative connected count at degree {n} for k={k}")
            raise InconsistencyError(f"Euler inversion produced u_{n} = {u_n} < 0 for k={k}")
        connected.append(u_n)
        running = running * _euler_factor(n, u_n, max_m)
        log_manager.main_logger.debug(f"k={k}: d_{n}={dims[n - 1]}, u_{n}={u_n}")

    euler_ok = euler_product(connected, max_m) == hilbert
    if not euler_ok:
        raise InconsistencyError(f"Euler product of connected counts does not reproduce the dimensions for k={k}")

    enumerated = []
    if cross_check:
        for d in range(1, max_m + 1):
            if enumeration_cost(d, k - 1) > budget:
                log_manager.main_logger.info(f"k={k}: enumeration cross-check stops before degree {d}")
                break
            direct = len(enumerate_orbits(k, d, connected_only=True, budget=budget, jobs=jobs))
            if direct != connected[d - 1]:
                log_manager.main_logger.error(f"k={k}, d={d}: inversion gives {connected[d - 1]}, enumeration gives {direct}")
                raise InconsistencyError(
                    f"Connected count mismatch at k={k}, d={d}: inversion {connected[d - 1]}, enumeration {direct}")
            enumerated.append(d)

    return CountTable(k=k, max_m=max_m, dims=dims, connected=connected, enumerated=enumerated, euler_ok=euler_ok)
