"""Equitable colorings, the swap/intro operators and exhaustive oracles.

An :class:`EqColoring` stores its classes as sorted vertex tuples; class ``j``
(1-based) is ``classes[j - 1]``.  The binary embedding uses the full color
range ``1..n``: ``x[v-1, j-1] = 1`` iff vertex ``v`` has color ``j`` and
``w[j-1] = 1`` iff ``j <= k``.  Flattened vectors list the ``x`` entries row by
row (vertex major) followed by ``w``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator

import numpy as np

from .errors import DomainError, SizeGuardError
from .graph import Graph, _bits, vertices_of

ENUMERATION_LIMIT = 8


@dataclass(frozen=True)
class EqColoring:
    n: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(sorted(c)) for c in self.classes))

    @property
    def k(self) -> int:
        return len(self.classes)

    @classmethod
    def from_mapping(cls, colors: dict[int, int] | list[int], n: int | None = None) -> "EqColoring":
        """Build from ``vertex -> color``; a list is read as ``colors[v - 1]``."""
        if not isinstance(colors, dict):
            colors = {i + 1: c for i, c in enumerate(colors)}
        n = len(colors) if n is None else n
        k = max(colors.values(), default=0)
        classes = [[] for _ in range(k)]
        for v, c in colors.items():
            classes[c - 1].append(v)
        return cls(n, tuple(tuple(c) for c in classes))

    def color_of(self) -> dict[int, int]:
        return {v: j for j, cls in enumerate(self.classes, 1) for v in cls}

    def relabel_vertices(self, perm: dict[int, int]) -> "EqColoring":
        return EqColoring(self.n, tuple(tuple(perm[v] for v in c) for c in self.classes))


@dataclass(frozen=True)
class BinaryPoint:
    x: np.ndarray
    w: np.ndarray

    @property
    def n(self) -> int:
        return self.w.shape[0]

    def vector(self) -> np.ndarray:
        return np.concatenate([self.x.ravel(), self.w])

    @classmethod
    def from_vector(cls, vec, n: int) -> "BinaryPoint":
        vec = np.asarray(vec)
        return cls(vec[: n * n].reshape(n, n), vec[n * n:])

    def __eq__(self, other):
        return (isinstance(other, BinaryPoint) and np.array_equal(self.x, other.x)
                and np.array_equal(self.w, other.w))

    __hash__ = None


@dataclass(frozen=True)
class OracleResult:
    chi_eq: int
    skip_set: frozenset[int]
    witnesses: dict[int, EqColoring] = field(default_factory=dict, compare=False, repr=False)

    @property
    def monotone(self) -> bool:
        return not self.skip_set

    @property
    def feasible_k(self) -> list[int]:
        return sorted(self.witnesses)


def size_limits(n: int, k: int) -> tuple[int, int]:
    return n // k, -(-n // k)


def is_equitable(g: Graph, c: EqColoring) -> bool:
    if c.n != g.n:
        raise DomainError(f"coloring is over {c.n} vertices, graph has {g.n}")
    if c.k == 0:
        return g.n == 0
    lo, hi = size_limits(g.n, c.k)
    seen = set()
    for cls in c.classes:
        if not lo <= len(cls) <= hi or not cls:
            return False
        if not g.is_stable(cls):
            return False
        seen.update(cls)
    return sum(len(cls) for cls in c.classes) == g.n and seen == set(g.vertices)


def swap(c: EqColoring, L) -> EqColoring:
    """Cyclically rotate classes along ``L``: class ``L[t]`` receives the old
    class ``L[t+1]`` and class ``L[-1]`` receives the old class ``L[0]``."""
    L = tuple(L)
    if len(set(L)) != len(L) or any(not 1 <= j <= c.k for j in L):
        raise DomainError(f"swap list {L} must hold distinct colors in 1..{c.k}")
    new = list(c.classes)
    for t, j in enumerate(L):
        new[j - 1] = c.classes[L[(t + 1) % len(L)] - 1]
    return EqColoring(c.n, tuple(new))


def intro(c: EqColoring, v: int) -> EqColoring:
    """Move ``v`` out of its two-vertex class into the new color ``k + 1``."""
    n, k = c.n, c.k
    if not (-(-n // 2) <= k <= n - 1):
        raise DomainError(f"intro needs ceil(n/2) <= k <= n-1, got k={k}, n={n}")
    owner = next((j for j, cls in enumerate(c.classes) if v in cls), None)
    if owner is None:
        raise DomainError(f"vertex {v} is not colored")
    if len(c.classes[owner]) != 2:
        raise DomainError(f"vertex {v} does not share its class with exactly one vertex")
    new = list(c.classes)
    new[owner] = tuple(u for u in c.classes[owner] if u != v)
    new.append((v,))
    return EqColoring(n, tuple(new))


def to_binary(c: EqColoring) -> BinaryPoint:
    n = c.n
    x = np.zeros((n, n), dtype=np.int64)
    for j, cls in enumerate(c.classes):
        for v in cls:
            x[v - 1, j] = 1
    w = np.zeros(n, dtype=np.int64)
    w[: c.k] = 1
    return BinaryPoint(x, w)


def from_binary(p: BinaryPoint) -> EqColoring:
    n = p.n
    k = int(np.asarray(p.w).sum())
    classes = [tuple(int(v) + 1 for v in np.flatnonzero(np.asarray(p.x)[:, j] > 0.5)) for j in range(k)]
    return EqColoring(n, tuple(classes))


# --- exhaustive search -----------------------------------------------------

def _search_order(g: Graph) -> list[int]:
    return sorted(g.vertices, key=lambda v: (-g.degree(v), v))


def iter_partitions(g: Graph, k: int) -> Iterator[tuple[int, ...]]:
    """Yield every unordered equitable ``k``-partition of V into stable sets,
    each exactly once, as a tuple of class bitmasks."""
    n = g.n
    if not 1 <= k <= n:
        return
    lo, hi = size_limits(n, k)
    n_big = n - k * lo          # classes that must have size lo + 1
    order = _search_order(g)
    classes: list[int] = []
    sizes: list[int] = []
    big = [0]

    def rec(i: int):
        remaining = n - i
        deficit = sum(lo - s for s in sizes if s < lo) + (k - len(classes)) * lo
        if deficit > remaining:
            return
        if i == n:
            if len(classes) == k:
                yield tuple(classes)
            return
        v = order[i]
        bit = 1 << v
        nv = g.masks[v]
        for idx in range(len(classes)):
            s = sizes[idx]
            if s >= hi or classes[idx] & nv:
                continue
            if s + 1 > lo and big[0] >= n_big:
                continue
            grew = s + 1 > lo
            classes[idx] |= bit
            sizes[idx] += 1
            big[0] += grew
            yield from rec(i + 1)
            big[0] -= grew
            sizes[idx] -= 1
            classes[idx] ^= bit
        if len(classes) < k:
            grew = 1 > lo
            if not grew or big[0] < n_big:
                classes.append(bit)
                sizes.append(1)
                big[0] += grew
                yield from rec(i + 1)
                big[0] -= grew
                sizes.pop()
                classes.pop()

    yield from rec(0)


def _coloring_from_masks(n: int, masks) -> EqColoring:
    cls = sorted((vertices_of(m) for m in masks), key=lambda c: c[0])
    return EqColoring(n, tuple(cls))


def exists_eqcol(g: Graph, k: int) -> EqColoring | None:
    """A witness ``k``-eqcol (classes sorted by minimum label) or ``None``."""
    if not 1 <= k <= max(g.n, 1):
        raise DomainError(f"k must lie in 1..{g.n}")
    for part in iter_partitions(g, k):
        return _coloring_from_masks(g.n, part)
    return None


def oracle(g: Graph) -> OracleResult:
    """Exact equitable chromatic number and skip set by exhaustive search."""
    if g.n == 0:
        return OracleResult(0, frozenset(), {})
    witnesses = {}
    chi = None
    for k in range(1, g.n + 1):
        c = exists_eqcol(g, k)
        if c is not None:
            witnesses[k] = c
            if chi is None:
                chi = k
    skip = frozenset(k for k in range(chi, g.n + 1) if k not in witnesses)
    return OracleResult(chi, skip, witnesses)


def count_partitions(g: Graph, k: int) -> int:
    return sum(1 for _ in iter_partitions(g, k))


def point_matrix(g: Graph, limit: int = ENUMERATION_LIMIT) -> np.ndarray:
    """All 0/1 points of the equitable coloring polytope as rows (uint8)."""
    n = g.n
    if n > limit:
        raise SizeGuardError(f"labeled enumeration refused for n={n} > {limit}")
    dim = n * n + n
    blocks = []
    for k in range(1, n + 1):
        perms = np.array(list(permutations(range(k))), dtype=np.int64)
        parts = list(iter_partitions(g, k))
        if not parts:
            continue
        owner = np.empty((len(parts), n), dtype=np.int64)
        for p, part in enumerate(parts):
            for ci, m in enumerate(part):
                for v in _bits(m):
                    owner[p, v - 1] = ci
        # colors[p, q, v] = perm q applied to the class index of v in partition p
        colors = perms[:, owner].transpose(1, 0, 2).reshape(-1, n)
        rows = np.zeros((colors.shape[0], dim), dtype=np.uint8)
        idx = np.arange(n) * n
        rows[np.arange(colors.shape[0])[:, None], idx[None, :] + colors] = 1
        rows[:, n * n: n * n + k] = 1
        blocks.append(rows)
    if not blocks:
        return np.zeros((0, dim), dtype=np.uint8)
    return np.vstack(blocks)


def enumerate_binary_points(g: Graph, limit: int = ENUMERATION_LIMIT) -> list[BinaryPoint]:
    n = g.n
    return [BinaryPoint.from_vector(row.astype(np.int64), n) for row in point_matrix(g, limit)]


def random_eqcol(g: Graph, k: int, rng, max_tries: int = 200) -> EqColoring | None:
    """Random equitable ``k``-coloring by randomized backtracking.

    Vertex order and class preference are shuffled; the search is abandoned
    after ``max_tries`` dead ends.
    """
    n = g.n
    lo, hi = size_limits(n, k)
    n_big = n - k * lo
    order = list(g.vertices)
    rng.shuffle(order)
    classes = [0] * k
    sizes = [0] * k
    big = [0]
    fails = [0]

    def rec(i):
        if fails[0] > max_tries:
            return False
        if i == n:
            return True
        remaining = n - i
        if sum(lo - s for s in sizes if s < lo) > remaining:
            fails[0] += 1
            return False
        v = order[i]
        slots = list(range(k))
        rng.shuffle(slots)
        for idx in slots:
            s = sizes[idx]
            if s >= hi or classes[idx] & g.masks[v]:
                continue
            grew = s + 1 > lo
            if grew and big[0] >= n_big:
                continue
            classes[idx] |= 1 << v
            sizes[idx] += 1
            big[0] += grew
            if rec(i + 1):
                return True
            big[0] -= grew
            sizes[idx] -= 1
            classes[idx] ^= 1 << v
        fails[0] += 1
        return False

    if not rec(0):
        return None
    return EqColoring(n, tuple(vertices_of(m) for m in classes))
