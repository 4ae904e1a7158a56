from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eqcol.coloring import (BinaryPoint, EqColoring, exists_eqcol, from_binary, intro, is_equitable,
                            iter_partitions, oracle, point_matrix, random_eqcol, swap, to_binary)
from eqcol.errors import DomainError, SizeGuardError
from eqcol.graph import Graph, complete_graph, cycle_graph

from conftest import rand_graph


def brute_points(g):
    """Every equitable coloring as a colour map with colours 1..k all used."""
    n = g.n
    out = set()
    for k in range(1, n + 1):
        lo, hi = n // k, -(-n // k)
        for cols in product(range(1, k + 1), repeat=n):
            sizes = [cols.count(j) for j in range(1, k + 1)]
            if min(sizes) < lo or max(sizes) > hi:
                continue
            if any(cols[u - 1] == cols[v - 1] for u, v in g.edges):
                continue
            out.add(cols)
    return out


def brute_oracle(g):
    ks = {max(c) for c in brute_points(g)}
    chi = min(ks)
    return chi, {k for k in range(chi, g.n + 1) if k not in ks}


def test_k33_skip_set(k33):
    res = oracle(k33)
    assert res.chi_eq == 2 and res.skip_set == {3}
    assert not res.monotone


def test_fixture_oracles(fig1, fig2, c5):
    assert oracle(c5).chi_eq == 3
    r1, r2 = oracle(fig1), oracle(fig2)
    assert (r1.chi_eq, r1.monotone) == (5, True)
    assert (r2.chi_eq, r2.monotone) == (3, True)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0, 1), st.integers(0, 10**6))
def test_oracle_and_points_against_brute_force(n, p, seed):
    g = rand_graph(n, p, seed)
    pts = brute_points(g)
    chi, skip = brute_oracle(g)
    res = oracle(g)
    assert (res.chi_eq, set(res.skip_set)) == (chi, skip)
    P = point_matrix(g)
    assert len(P) == len(pts)
    got = set()
    for row in P:
        x = row[: n * n].reshape(n, n)
        got.add(tuple(int(np.argmax(x[v])) + 1 for v in range(n)))
    assert got == pts
    for k, w in res.witnesses.items():
        assert w.k == k and is_equitable(g, w)


def test_partitions_are_unordered():
    # K_{1,1,...}: the empty graph on 4 vertices has S(4,2)-style counts
    g = Graph(4)
    # 2 classes of size 2: 3 unordered partitions
    assert sum(1 for _ in iter_partitions(g, 2)) == 3


def test_is_equitable_rules():
    g = cycle_graph(5)
    assert is_equitable(g, EqColoring(5, ((1, 3), (2, 4), (5,))))
    assert not is_equitable(g, EqColoring(5, ((1, 3), (2, 4, 5))))   # 4-5 adjacent
    assert not is_equitable(Graph(5), EqColoring(5, ((1, 2, 3, 4), (5,))))
    with pytest.raises(DomainError):
        is_equitable(g, EqColoring(4, ((1, 2), (3, 4))))


def test_swap_and_intro():
    c = EqColoring(5, ((1,), (2,), (3,), (4, 5)))
    s = swap(c, (4, 1))
    assert s.classes == ((4, 5), (2,), (3,), (1,))
    s3 = swap(c, (1, 2, 3))
    assert s3.classes[0] == (2,) and s3.classes[1] == (3,) and s3.classes[2] == (1,)
    d = intro(c, 4)
    assert d.k == 5 and d.classes[3] == (5,) and d.classes[4] == (4,)
    with pytest.raises(DomainError):
        intro(c, 1)
    with pytest.raises(DomainError):
        swap(c, (1, 1))


def test_binary_round_trip():
    c = EqColoring(4, ((1, 3), (2, 4)))
    p = to_binary(c)
    assert p.w.tolist() == [1, 1, 0, 0]
    assert from_binary(p) == c
    assert BinaryPoint.from_vector(p.vector(), 4) == p


def test_size_guard():
    with pytest.raises(SizeGuardError):
        point_matrix(Graph(9))


def test_random_eqcol_is_equitable():
    import random
    g = cycle_graph(7)
    rng = random.Random(4)
    for k in (3, 4, 5, 7):
        c = random_eqcol(g, k, rng)
        assert c is not None and c.k == k and is_equitable(g, c)
    assert exists_eqcol(complete_graph(4), 3) is None
