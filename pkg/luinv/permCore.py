"""
Permutations, permutation tuples and their orbits under simultaneous conjugation.

An r-tuple of permutations of {1..m} is the same thing as an m-fold covering of the
graph with one vertex and r coloured loops: vertex l has a colour-i edge to sigma_i(l).
Relabelling the vertices conjugates every slot by the same permutation, so isomorphism
classes of coverings are orbits of tuples, which are represented by the lexicographically
least tuple of the orbit (OrbitKey).
"""
import itertools
import math
import numbers
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

import networkx as nx

from appConfig import app_config
from loggerConfig import log_manager


class PermutationError(ValueError):
    """Invalid permutation data or incompatible sizes/arities."""


class BudgetExceededError(ValueError):
    """The requested enumeration or contraction is larger than the configured budget."""


class Permutation(object):
    def __init__(self, images):
        """
        Initialize a permutation from its one-line notation.

        Parameters:
        - images (sequence of int): 1-based one-line notation, images[l-1] = sigma(l).
        """
        images = list(images)
        if not all(isinstance(v, numbers.Integral) and not isinstance(v, bool) for v in images):
            raise PermutationError(f"Permutation entries must be integers, got {images}")
        zero_based = tuple(int(v) - 1 for v in images)
        if len(zero_based) == 0 or sorted(zero_based) != list(range(len(zero_based))):
            raise PermutationError(f"Not a permutation of 1..{len(zero_based)}: {list(images)}")
        self.size = len(zero_based)
        self.map = zero_based  # 0-based images, used by the algorithms below

    @classmethod
    def from_zero_based(cls, images):
        return cls([v + 1 for v in images])

    @classmethod
    def identity(cls, m):
        return cls.from_zero_based(range(m))

    @property
    def images(self):
        """1-based one-line notation."""
        return tuple(v + 1 for v in self.map)

    def __call__(self, point):
        return self.map[point - 1] + 1

    def is_identity(self):
        return all(v == i for i, v in enumerate(self.map))

    def cycles(self):
        """
        Decompose the permutation into disjoint cycles.

        Returns:
        - list: Cycles as tuples of 1-based points, each starting at its smallest point.
        """
        seen = [False] * self.size
        cycles = []
        for start in range(self.size):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x + 1)
                x = self.map[x]
            cycles.append(tuple(cycle))
        return cycles

    def cycle_type(self):
        """Cycle lengths in decreasing order."""
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.map == other.map

    def __lt__(self, other):
        return self.map < other.map

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def compose(p, q):
    """
    Compose two permutations, (p o q)(l) = p(q(l)).
    """
    if p.size != q.size:
        raise PermutationError(f"Cannot compose permutations of sizes {p.size} and {q.size}")
    return Permutation.from_zero_based(p.map[x] for x in q.map)


def inverse(p):
    inv = [0] * p.size
    for x, y in enumerate(p.map):
        inv[y] = x
    return Permutation.from_zero_based(inv)


class PermTuple(object):
    def __init__(self, perms):
        """
        Initialize a tuple of permutations of a common size.

        Parameters:
        - perms (sequence): Permutation objects or 1-based one-line lists.
        """
        perms = tuple(p if isinstance(p, Permutation) else Permutation(p) for p in perms)
        if len(perms) < 1:
            raise PermutationError("A permutation tuple needs at least one slot (k >= 2)")
        sizes = {p.size for p in perms}
        if len(sizes) != 1:
            raise PermutationError(f"All slots must permute the same set, got sizes {sorted(sizes)}")
        self.perms = perms
        self.m = perms[0].size
        self.arity = len(perms)

    @classmethod
    def from_maps(cls, maps):
        """Build a tuple from 0-based image sequences."""
        return cls([Permutation.from_zero_based(m) for m in maps])

    @classmethod
    def identity(cls, m, arity):
        return cls([Permutation.identity(m)] * arity)

    @property
    def maps(self):
        return tuple(p.map for p in self.perms)

    def key(self):
        """Concatenated 0-based one-line notations; the order used for canonical forms."""
        return tuple(itertools.chain.from_iterable(self.maps))

    def inverse(self):
        """Slot-wise inverse."""
        return PermTuple([inverse(p) for p in self.perms])

    def to_lists(self):
        return [list(p.images) for p in self.perms]

    def __eq__(self, other):
        return isinstance(other, PermTuple) and self.maps == other.maps

    def __lt__(self, other):
        return (self.m, self.key()) < (other.m, other.key())

    def __hash__(self):
        return hash(self.maps)

    def __repr__(self):
        return f"PermTuple({self.to_lists()})"


class OrbitKey(object):
    def __init__(self, canonical_tuple, connected):
        """
        Canonical representative of an orbit under simultaneous conjugation.
        Create through canonical_form() or orbit_key(); the tuple is assumed canonical.

        Parameters:
        - canonical_tuple (PermTuple): The lexicographically least element of the orbit.
        - connected (bool): Whether the generated group acts transitively.
        """
        self.tuple = canonical_tuple
        self.is_connected = connected

    @property
    def m(self):
        return self.tuple.m

    @property
    def arity(self):
        return self.tuple.arity

    def __eq__(self, other):
        return isinstance(other, OrbitKey) and self.tuple == other.tuple

    def __lt__(self, other):
        return self.tuple < other.tuple

    def __hash__(self):
        return hash(self.tuple)

    def __repr__(self):
        return f"OrbitKey({self.tuple.to_lists()})"


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def blocks(self):
        """Blocks as sorted lists, ordered by their smallest element."""
        groups = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(groups.values())


def conjugate(t, pi):
    """
    Simultaneous conjugation, every slot sigma_i becomes pi o sigma_i o pi^-1.

    Parameters:
    - t (PermTuple): The tuple to act on.
    - pi (Permutation): The relabelling.

    Returns:
    - PermTuple: The conjugated tuple.
    """
    if pi.size != t.m:
        raise PermutationError(f"Cannot conjugate a tuple on {t.m} points by a permutation of size {pi.size}")
    maps = []
    for sigma in t.maps:
        image = [0] * t.m
        for x in range(t.m):
            image[pi.map[x]] = pi.map[sigma[x]]
        maps.append(image)
    return PermTuple.from_maps(maps)


def _least_relabelling(maps, m):
    """
    Search the relabelling that makes the concatenated one-line notation least.
    Labels are handed out in increasing order, so a branch only happens when a new
    label has to be given to an unlabelled point; a branch is dropped as soon as its
    prefix exceeds the best sequence found so far.

    Returns:
    - tuple: (best sequence, label of every point).
    """
    total = len(maps) * m
    best = [None, None]

    def prefix_state(seq):
        # 1: prefix equals best prefix, 0: strictly smaller, -1: larger
        if best[0] is None:
            return 1
        head = best[0][:len(seq)]
        if seq == head:
            return 1
        return 0 if seq < head else -1

    def extend(label, inv, count, pos, seq, tight):
        while pos < total:
            slot, j = divmod(pos, m)
            if j >= count:
                for x in range(m):
                    if label[x] >= 0:
                        continue
                    state = prefix_state(seq)
                    if state < 0:
                        return
                    child_label = label[:]
                    child_inv = inv[:]
                    child_label[x] = j
                    child_inv[j] = x
                    extend(child_label, child_inv, count + 1, pos, seq[:], state == 1)
                return
            y = maps[slot][inv[j]]
            if label[y] < 0:
                label[y] = count
                inv[count] = y
                count += 1
            value = label[y]
            if tight and best[0] is not None:
                if value > best[0][pos]:
                    return
                if value < best[0][pos]:
                    tight = False
            seq.append(value)
            pos += 1
        if best[0] is None or not tight:
            best[0] = seq
            best[1] = label

    extend([-1] * m, [-1] * m, 0, 0, [], True)
    return best[0], best[1]


def canonical_form(t):
    """
    Canonical representative of the orbit of t under simultaneous conjugation.

    Parameters:
    - t (PermTuple): Any element of the orbit.

    Returns:
    - tuple: (OrbitKey, witness) where conjugate(t, witness) is the canonical tuple.
    """
    m = t.m
    seq, label = _least_relabelling(t.maps, m)
    canonical = PermTuple.from_maps([seq[i * m:(i + 1) * m] for i in range(t.arity)])
    witness = Permutation.from_zero_based(label)
    return OrbitKey(canonical, is_connected(canonical)), witness


def orbit_key(t):
    return canonical_form(t)[0]


def star(t1, t2):
    """
    Block-diagonal join of two tuples: slot i acts as t1's slot on {1..m1} and as the
    shifted t2 slot on {m1+1..m1+m2}. Corresponds to the disjoint union of coverings.
    """
    if t1.arity != t2.arity:
        raise PermutationError(f"Cannot join tuples of arity {t1.arity} and {t2.arity}")
    shift = t1.m
    maps = [list(a) + [v + shift for v in b] for a, b in zip(t1.maps, t2.maps)]
    return PermTuple.from_maps(maps)


def star_orbits(a, b):
    """The induced product on orbits; commutative and associative."""
    return orbit_key(star(a.tuple, b.tuple))


def _point_blocks(t):
    uf = UnionFind(t.m)
    for sigma in t.maps:
        for x in range(t.m):
            uf.union(x, sigma[x])
    return uf.blocks()


def is_connected(t):
    """True iff the group generated by the slots acts transitively on {1..m}."""
    return len(_point_blocks(t)) == 1


def components(t):
    """
    Split a tuple into its transitive pieces (connected components of the covering).

    Returns:
    - list: Canonical OrbitKeys of the components, sorted; a multiset in sorted form.
    """
    keys = []
    for block in _point_blocks(t):
        position = {x: i for i, x in enumerate(block)}
        maps = [[position[sigma[x]] for x in block] for sigma in t.maps]
        keys.append(orbit_key(PermTuple.from_maps(maps)))
    return sorted(keys)


def multiplicities(keys):
    """
    Group a multiset of OrbitKeys into (key, multiplicity) pairs in canonical order.
    """
    counts = Counter(keys)
    return [(key, counts[key]) for key in sorted(counts)]


def _orbits_with_first_slot(first, m, arity, connected_only):
    """
    Canonical tuples whose first slot is the given class representative, in lexicographic order.
    Module level so it can run in a worker process.
    """
    found = []
    for rest in itertools.product(itertools.permutations(range(m)), repeat=arity - 1):
        maps = (first,) + rest
        seq, _ = _least_relabelling(maps, m)
        if tuple(seq) != tuple(itertools.chain.from_iterable(maps)):
            continue
        t = PermTuple.from_maps(maps)
        if connected_only and not is_connected(t):
            continue
        found.append(maps)
    return found


def class_count(m):
    """Number of conjugacy classes of S_m, i.e. the number of partitions of m."""
    ways = [1] + [0] * m
    for part in range(1, m + 1):
        for total in range(part, m + 1):
            ways[total] += ways[total - part]
    return ways[m]


def enumeration_cost(m, arity):
    """
    Estimated elementary steps of enumerate_orbits: one canonicalization, about arity * m^2
    steps, for every candidate tuple whose first slot is a class representative.
    """
    return class_count(m) * math.factorial(m) ** (arity - 1) * arity * m * m


def enumerate_orbits(k, m, connected_only=False, budget=None, jobs=1, arity=None):
    """
    Enumerate all orbits of (k-1)-tuples of permutations of {1..m}, one canonical key each.
    The first slot of a canonical tuple is the least element of its conjugacy class, so only
    those first slots are iterated; the remaining slots run over all of S_m in lexicographic
    order and a tuple is kept iff it equals its own canonical form.

    Parameters:
    - k (int): Number of parties, k >= 2.
    - m (int): Number of points (the degree).
    - connected_only (bool): Keep only transitive tuples (connected coverings).
    - budget (int): Cap on enumeration_cost(m, arity); defaults to the configured enumeration budget.
    - jobs (int): Worker processes; results do not depend on it.
    - arity (int): Number of slots, defaults to k-1 (k for the mixed-state graph).

    Returns:
    - list: OrbitKeys sorted by the canonical order.
    """
    if k < 2:
        raise PermutationError(f"k must be at least 2, got {k}")
    if m < 1:
        raise PermutationError(f"m must be positive, got {m}")
    arity = k - 1 if arity is None else arity
    budget = app_config.ENUMERATION_BUDGET if budget is None else budget
    steps = enumeration_cost(m, arity)
    if steps > budget:
        log_manager.main_logger.error(f"Enumeration of S_{m}^{arity} needs about {steps} steps, budget is {budget}")
        raise BudgetExceededError(f"Enumerating {arity}-tuples over S_{m} needs about {steps} steps, budget is {budget}")

    log_manager.main_logger.info(f"Enumerating orbits: k={k}, m={m}, arity={arity}, connected_only={connected_only}")
    firsts = []
    for p in itertools.permutations(range(m)):
        seq, _ = _least_relabelling((p,), m)
        if tuple(seq) == p:
            firsts.append(p)

    if jobs > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = pool.map(_orbits_with_first_slot, firsts,
                              itertools.repeat(m), itertools.repeat(arity), itertools.repeat(connected_only))
            found = [maps for chunk in chunks for maps in chunk]
    else:
        found = []
        for first in firsts:
            found.extend(_orbits_with_first_slot(first, m, arity, connected_only))

    keys = []
    for maps in found:
        t = PermTuple.from_maps(maps)
        keys.append(OrbitKey(t, is_connected(t)))
    keys.sort()
    log_manager.main_logger.info(f"Found {len(keys)} orbits for k={k}, m={m}")
    return keys


def random_perm_tuple(m, arity, rng):
    """
    Draw a uniformly random tuple of permutations.

    Parameters:
    - m (int): Number of points.
    - arity (int): Number of slots.
    - rng (numpy.random.Generator): Seeded generator.
    """
    return PermTuple.from_maps([[int(v) for v in rng.permutation(m)] for _ in range(arity)])


class CoveringGraph(object):
    def __init__(self, num_vertices, edges):
        """
        Finite covering of the bouquet graph.

        Parameters:
        - num_vertices (int): Number of vertices m, labelled 1..m.
        - edges (list): (source, target, colour) triples, colours numbered from 1.
        """
        self.num_vertices = num_vertices
        self.edges = [tuple(e) for e in edges]
        self.graph = nx.MultiDiGraph()
        self.graph.add_nodes_from(range(1, num_vertices + 1))
        for source, target, colour in self.edges:
            self.graph.add_edge(source, target, colour=colour)

    @property
    def colours(self):
        return sorted({colour for _, _, colour in self.edges})

    def check_degrees(self):
        """
        Every vertex has exactly one outgoing and one incoming edge of every colour.
        """
        for colour in self.colours:
            outgoing = Counter(s for s, _, c in self.edges if c == colour)
            incoming = Counter(t for _, t, c in self.edges if c == colour)
            for v in range(1, self.num_vertices + 1):
                if outgoing[v] != 1 or incoming[v] != 1:
                    return False
        return True

    def to_perm_tuple(self):
        """Read the permutations back from the edges; colour i gives slot i."""
        if not self.check_degrees():
            raise PermutationError("Graph is not a covering of the bouquet: degree condition violated")
        perms = []
        for colour in self.colours:
            images = [0] * self.num_vertices
            for source, target, c in self.edges:
                if c == colour:
                    images[source - 1] = target
            perms.append(Permutation(images))
        return PermTuple(perms)

    def is_connected(self):
        return nx.is_weakly_connected(self.graph)

    def to_dot(self, name="covering"):
        lines = [f"digraph {name} {{"]
        for v in range(1, self.num_vertices + 1):
            lines.append(f"  {v};")
        for source, target, colour in self.edges:
            lines.append(f'  {source} -> {target} [label="c{colour}"];')
        lines.append("}")
        return "\n".join(lines)


def to_covering_graph(t):
    """
    The covering graph of a tuple: vertices 1..m and a colour-i edge l -> sigma_i(l).
    """
    edges = []
    for colour, sigma in enumerate(t.perms, start=1):
        for l in range(1, t.m + 1):
            edges.append((l, sigma(l), colour))
    return CoveringGraph(t.m, edges)


def perm_tuple_to_json(t, k):
    """Orbit JSON: {"k": int, "m": int, "perms": [[...], ...]} with 1-based one-line notation."""
    return {"k": k, "m": t.m, "perms": t.to_lists()}


def perm_tuple_from_json(data):
    """
    Parse orbit JSON.

    Returns:
    - tuple: (k, PermTuple)
    """
    if not isinstance(data, dict):
        raise PermutationError(f"Orbit JSON must be an object, got {type(data).__name__}")
    try:
        k = data["k"]
        t = PermTuple(data["perms"])
    except (KeyError, TypeError) as error:
        raise PermutationError(f"Malformed orbit JSON: {error}")
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise PermutationError(f"Orbit JSON needs an integer k >= 2, got {k!r}")
    if "m" in data and data["m"] != t.m:
        raise PermutationError(f"Orbit JSON declares m={data['m']} but permutations have size {t.m}")
    return k, t
