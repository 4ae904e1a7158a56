"""Simple undirected graphs on vertices ``1..n`` and greedy combinatorial bounds.

Vertex sets are exchanged as sorted tuples.  Internally every vertex set is
also available as a Python ``int`` bitmask where bit ``v`` stands for vertex
``v`` (bit 0 is never set); the greedy routines and the exact brute-force
helpers work on those masks.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .errors import DomainError


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    return tuple(_bits(mask))


class Graph:
    """Immutable simple graph with vertices labeled ``1..n``."""

    __slots__ = ("n", "edges", "adj", "masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise DomainError(f"edge ({u},{v}) has an endpoint outside 1..{n}")
            es.add((u, v) if u < v else (v, u))
        adj = [set() for _ in range(n + 1)]
        for u, v in es:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "adj", tuple(frozenset(a) for a in adj))
        object.__setattr__(self, "masks", tuple(mask_of(a) for a in adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def all_mask(self) -> int:
        return ((1 << (self.n + 1)) - 1) ^ 1

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def closed_neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v] | {v}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(self.adj[v]) for v in self.vertices), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def density(self) -> float:
        """Percentage of density, ``100 |E| / (n(n-1)/2)``."""
        if self.n < 2:
            return 0.0
        return 100.0 * len(self.edges) / (self.n * (self.n - 1) / 2)

    def is_stable(self, vs: Iterable[int]) -> bool:
        m = mask_of(vs)
        return all(not (self.masks[v] & m) for v in _bits(m))

    def is_clique(self, vs: Iterable[int]) -> bool:
        m = mask_of(vs)
        return all((self.masks[v] | (1 << v)) & m == m for v in _bits(m))

    def isolated_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if not self.adj[v])

    def universal_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if len(self.adj[v]) == self.n - 1)

    def induced(self, vs: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph relabeled ``1..|vs|`` plus the original labels."""
        keep = tuple(sorted(set(vs)))
        pos = {v: i + 1 for i, v in enumerate(keep)}
        es = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph(len(keep), es), keep

    def relabel(self, perm: dict[int, int] | list[int]) -> "Graph":
        """Apply ``old -> new``; a list is read as ``perm[old - 1] = new``."""
        if not isinstance(perm, dict):
            perm = {i + 1: p for i, p in enumerate(perm)}
        if sorted(perm) != list(self.vertices) or sorted(perm.values()) != list(self.vertices):
            raise DomainError("relabeling must be a permutation of 1..n")
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])


def complement(g: Graph) -> Graph:
    return Graph(g.n, [(u, v) for u, v in combinations(g.vertices, 2) if v not in g.adj[u]])


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(u, v) for u in range(1, a + 1) for v in range(a + 1, a + b + 1)])


# --- greedy routines -------------------------------------------------------

def _grow_clique(g: Graph, clique: int, cand: int, key) -> int:
    while cand:
        v = max(_bits(cand), key=key)
        clique |= 1 << v
        cand &= g.masks[v]
    return clique


def maximal_clique(g: Graph) -> tuple[int, ...]:
    """Greedy 1-maximal clique: seed with a maximum-degree vertex, then keep
    adding the common neighbor of highest degree (ties to the lowest label)."""
    if g.n == 0:
        return ()
    key = lambda v: (len(g.adj[v]), -v)
    seed = max(g.vertices, key=key)
    return vertices_of(_grow_clique(g, 1 << seed, g.masks[seed], key))


def extend_clique(g: Graph, clique: Iterable[int], key=None) -> tuple[int, ...]:
    """Extend a clique to a maximal one (default preference: lowest label)."""
    cm = mask_of(clique)
    cand = g.all_mask & ~cm
    for v in _bits(cm):
        cand &= g.masks[v]
    key = key or (lambda v: -v)
    return vertices_of(_grow_clique(g, cm, cand, key))


def is_maximal_clique(g: Graph, vs: Iterable[int]) -> bool:
    vs = tuple(vs)
    if not vs or not g.is_clique(vs):
        return False
    cand = g.all_mask & ~mask_of(vs)
    for v in vs:
        cand &= g.masks[v]
    return cand == 0


def greedy_clique_partition(g: Graph, within: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """Cover ``within`` (default: all of V) by disjoint cliques.

    Each clique starts at the lowest uncovered vertex and repeatedly absorbs the
    uncovered common neighbor of highest degree (counted among uncovered
    vertices; ties to the lowest label).
    """
    left = g.all_mask if within is None else mask_of(within)
    parts = []
    while left:
        seed = (left & -left).bit_length() - 1
        clique = 1 << seed
        cand = g.masks[seed] & left
        while cand:
            v = max(_bits(cand), key=lambda w: ((g.masks[w] & left).bit_count(), -w))
            clique |= 1 << v
            cand &= g.masks[v]
        parts.append(vertices_of(clique))
        left &= ~clique
    return parts


def clique_partition_number(g: Graph, within: Iterable[int] | None = None) -> int:
    """Size of the greedy clique partition, an upper bound on theta."""
    return len(greedy_clique_partition(g, within))


def greedy_stable_set(g: Graph, within: Iterable[int] | None = None) -> tuple[int, ...]:
    """Repeatedly take a minimum-degree vertex of the residual induced subgraph."""
    left = g.all_mask if within is None else mask_of(within)
    chosen = 0
    while left:
        v = min(_bits(left), key=lambda w: ((g.masks[w] & left).bit_count(), w))
        chosen |= 1 << v
        left &= ~(g.masks[v] | (1 << v))
    return vertices_of(chosen)


def stability_bounds(g: Graph, s: Iterable[int]) -> tuple[int, int]:
    """``(lower, upper)`` bracketing the stability number of ``G[s]``."""
    s = tuple(s)
    if not s:
        return 0, 0
    for v in s:
        if not 1 <= v <= g.n:
            raise DomainError(f"vertex {v} outside 1..{g.n}")
    return len(greedy_stable_set(g, s)), clique_partition_number(g, s)


# --- exact helpers (small instances only) ---------------------------------

def stability_number(g: Graph, s: Iterable[int] | None = None) -> int:
    """Exact stability number of ``G[s]`` by branching on a vertex; for small
    induced subgraphs (a few dozen vertices at most)."""
    left = g.all_mask if s is None else mask_of(s)

    def rec(m: int) -> int:
        if not m:
            return 0
        # a vertex of degree <= 1 in G[m] can always be taken
        best_v, best_d = -1, -1
        for v in _bits(m):
            d = (g.masks[v] & m).bit_count()
            if d <= 1:
                return 1 + rec(m & ~(g.masks[v] | (1 << v)))
            if d > best_d:
                best_v, best_d = v, d
        v = best_v
        return max(rec(m & ~(1 << v)), 1 + rec(m & ~(g.masks[v] | (1 << v))))

    return rec(left)


def clique_cover_number(g: Graph) -> int:
    """Exact minimum clique cover (chromatic number of the complement) by
    brute force over stable-set partitions of the complement; tiny graphs only."""
    if g.n == 0:
        return 0
    comp = complement(g)
    order = sorted(g.vertices, key=lambda v: -comp.degree(v))
    best = [g.n]

    def rec(i: int, classes: list[int]):
        if len(classes) >= best[0]:
            return
        if i == len(order):
            best[0] = len(classes)
            return
        v = order[i]
        for idx, c in enumerate(classes):
            if not comp.masks[v] & c:
                classes[idx] = c | (1 << v)
                rec(i + 1, classes)
                classes[idx] = c
        classes.append(1 << v)
        rec(i + 1, classes)
        classes.pop()

    rec(0, [])
    return best[0]


def is_alpha_maximal(g: Graph, s: Iterable[int], alpha: int | None = None) -> bool:
    """True when every vertex outside ``s`` raises the stability number."""
    s = tuple(s)
    a = stability_number(g, s) if alpha is None else alpha
    rest = set(g.vertices) - set(s)
    return all(stability_number(g, s + (v,)) == a + 1 for v in rest)
