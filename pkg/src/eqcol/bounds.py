"""Initial bounds on the equitable chromatic number and vertex labeling."""
from __future__ import annotations

from dataclasses import dataclass

from .coloring import EqColoring, size_limits
from .graph import Graph, clique_partition_number, maximal_clique, stability_bounds


@dataclass(frozen=True)
class InitBounds:
    lb: int
    ub: int
    ub_witness: EqColoring
    labeling: tuple[int, ...]
    alpha_lo: tuple[int, ...]   # index v-1 -> lower bound on alpha(N(v))
    alpha_hi: tuple[int, ...]
    clique: tuple[int, ...] = ()


def naive_upper_bound(g: Graph) -> tuple[int, EqColoring]:
    """Greedy equitable coloring.

    Vertices are taken in label order and put into the smallest non-empty
    non-conflicting class (lowest color among ties), opening a new color when
    none fits.  The result is then balanced by moving vertices from a largest
    class into a smallest non-conflicting one; when no such move exists an empty
    color is added.
    """
    n = g.n
    if n == 0:
        return 0, EqColoring(0, ())
    classes: list[set[int]] = []
    for v in g.vertices:
        fits = [i for i, c in enumerate(classes) if not (c & g.adj[v])]
        if fits:
            classes[min(fits, key=lambda i: (len(classes[i]), i))].add(v)
        else:
            classes.append({v})
    while True:
        sizes = [len(c) for c in classes]
        big, small = max(sizes), min(sizes)
        if big - small <= 1:
            break
        moved = False
        for i in (i for i, s in enumerate(sizes) if s == big):
            for t in (t for t, s in enumerate(sizes) if s == small):
                for v in sorted(classes[i]):
                    if not (classes[t] & g.adj[v]):
                        classes[i].remove(v)
                        classes[t].add(v)
                        moved = True
                        break
                if moved:
                    break
            if moved:
                break
        if not moved:
            classes.append(set())
    classes = [c for c in classes if c]
    col = EqColoring(n, tuple(tuple(sorted(c)) for c in sorted(classes, key=min)))
    lo, hi = size_limits(n, col.k)
    assert all(lo <= len(c) <= hi for c in col.classes)
    return col.k, col


def lower_bound(g: Graph, clique: tuple[int, ...] | None = None) -> int:
    """max(|Q|, max_v ceil((n+1) / (theta(G - N[v]) + 2))) with a greedy theta."""
    n = g.n
    if n == 0:
        return 0
    q = len(maximal_clique(g) if clique is None else clique)
    best = 0
    for v in g.vertices:
        rest = [u for u in g.vertices if u != v and u not in g.adj[v]]
        theta = clique_partition_number(g, rest)
        best = max(best, -(-(n + 1) // (theta + 2)))
    return max(q, best)


def label_vertices(g: Graph, clique: tuple[int, ...] | None = None) -> tuple[int, ...]:
    """Permutation ``perm`` with ``perm[old - 1] = new``.

    Clique vertices get ``1..q`` and the rest follow in non-increasing degree;
    ties keep the original order.
    """
    q = maximal_clique(g) if clique is None else clique
    key = lambda v: (-g.degree(v), v)
    order = sorted(q, key=key) + sorted((v for v in g.vertices if v not in set(q)), key=key)
    perm = [0] * g.n
    for new, old in enumerate(order, 1):
        perm[old - 1] = new
    return tuple(perm)


def is_degree_monotone(g: Graph, q: int) -> bool:
    return all(g.degree(v) >= g.degree(v + 1) for v in range(q + 1, g.n))


def initial_bounds(g: Graph) -> InitBounds:
    """Bounds for a graph that has already been relabeled."""
    clique = maximal_clique(g)
    ub, witness = naive_upper_bound(g)
    lb = min(lower_bound(g, clique), ub)
    lo, hi = [], []
    for v in g.vertices:
        a, b = stability_bounds(g, sorted(g.adj[v]))
        lo.append(a)
        hi.append(b)
    return InitBounds(lb, ub, witness, tuple(range(1, g.n + 1)), tuple(lo), tuple(hi), clique)
