from hypothesis import given, settings, strategies as st

from eqcol.bounds import initial_bounds, is_degree_monotone, label_vertices, lower_bound, naive_upper_bound
from eqcol.coloring import is_equitable, oracle
from eqcol.graph import Graph, complete_graph, maximal_clique, stability_number

from conftest import rand_graph


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.floats(0, 1), st.integers(0, 10**6))
def test_bounds_sandwich_oracle(n, p, seed):
    g = rand_graph(n, p, seed)
    chi = oracle(g).chi_eq
    ub, col = naive_upper_bound(g)
    assert col.k == ub and is_equitable(g, col)
    assert lower_bound(g) <= chi <= ub


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.floats(0, 1), st.integers(0, 10**6))
def test_labeling(n, p, seed):
    g = rand_graph(n, p, seed)
    q = maximal_clique(g)
    perm = label_vertices(g, q)
    assert sorted(perm) == list(range(1, n + 1))
    h = g.relabel(list(perm))
    assert h.is_clique(range(1, len(q) + 1))
    assert is_degree_monotone(h, len(q))
    b = initial_bounds(h)
    for v in h.vertices:
        exact = stability_number(h, sorted(h.adj[v]))
        assert b.alpha_lo[v - 1] <= exact <= b.alpha_hi[v - 1]


def test_complete_graph_bounds():
    b = initial_bounds(complete_graph(5))
    assert b.lb == b.ub == 5


def test_lower_bound_uses_clique_size():
    # a triangle plus two isolated vertices: the clique gives 3
    g = Graph(5, [(1, 2), (2, 3), (1, 3)])
    assert lower_bound(g) >= 3
