import itertools
from math import ceil

import networkx as nx
import numpy as np
import pytest

from eqcol.coloring import BinaryPoint, exists_eqcol, from_binary, oracle, point_matrix
from eqcol.cuts import (CutRow, X, block_cut, clique_cut, clique_neighborhood_cut, outside_neighborhood_cut,
                        rank_cut, s_color_cut, slacks, subneighborhood_cut, two_rank_cut)
from eqcol.errors import DomainError
from eqcol.graph import Graph, complete_graph, cycle_graph, stability_number
from eqcol.polytope import (affine_rank, ecp_dimension, exact_rank, face_dims_equal, float_affine_rank,
                            format_verdict, minimal_equations_hold, on_clique_neighborhood_face,
                            on_outside_neighborhood_face, spanning_family, standing_assumptions, verify_dimension,
                            verify_face)

from conftest import rand_graph


def nonneg(v, j):
    return CutRow("nonneg", (("v", v), ("j", j)), {X(v, j): -1}, 0)


def standing_graphs(n, count, p=0.45, start=0):
    out, seed = [], start
    while len(out) < count:
        g = rand_graph(n, p, seed)
        if standing_assumptions(g):
            out.append(g)
        seed += 1
    return out


class Enum:
    """Enumerated points of a small graph together with decoded colorings."""

    def __init__(self, g):
        self.g = g
        self.orc = oracle(g)
        self.P = point_matrix(g)
        self.dim = ecp_dimension(g, self.orc)
        self._cols = None

    @property
    def colorings(self):
        if self._cols is None:
            n = self.g.n
            self._cols = [from_binary(BinaryPoint.from_vector(p, n)) for p in self.P]
        return self._cols

    def face(self, row):
        return verify_face(self.g, row, orc=self.orc, points=self.P)


@pytest.fixture(scope="module")
def c5e():
    return Enum(cycle_graph(5))


@pytest.fixture(scope="module")
def small():
    return [Enum(g) for g in standing_graphs(6, 3)]


# --- exact rank ------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(20))
def test_exact_rank_matches_numpy_on_integer_matrices(seed):
    r = np.random.default_rng(seed)
    base = r.integers(-2, 3, size=(r.integers(2, 7), 9))
    M = np.vstack([base, base[:2].sum(axis=0, keepdims=True), r.integers(0, 2, size=(3, 9))])
    assert exact_rank(M) == np.linalg.matrix_rank(M.astype(float))


def test_exact_rank_sees_tiny_differences():
    # rows differing by 1/10^12 are independent over the rationals
    big = 10**12
    M = np.array([[big, big + 1], [big - 1, big]], dtype=object)
    assert exact_rank(M) == 2


def test_affine_rank_simple():
    P = np.array([[0, 0], [1, 0], [0, 1], [1, 1]])
    assert affine_rank(P) == 3 and float_affine_rank(P) == 3
    assert affine_rank(np.array([[1, 2], [2, 4], [3, 6]])) == 2


# --- dimension -----------------------------------------------------------------

def test_dimension_examples(k33, fig2):
    assert ecp_dimension(cycle_graph(5)) == 25 - (3 + 0 + 1)
    assert ecp_dimension(k33) == 36 - (2 + 1 + 1)
    assert ecp_dimension(fig2) == 121 - (3 + 0 + 1)


@pytest.mark.parametrize("name,size", [("c5", 22), ("k33", 33)])
def test_spanning_family(name, size, k33):
    g = cycle_graph(5) if name == "c5" else k33
    fam = spanning_family(g)
    assert len(fam) == size and fam.rank == size
    from eqcol.coloring import is_equitable
    assert all(is_equitable(g, c) for c in fam.colorings)


@pytest.mark.parametrize("g", standing_graphs(6, 4) + standing_graphs(7, 3, start=100))
def test_spanning_family_independent(g):
    orc = oracle(g)
    fam = spanning_family(g, orc)
    assert len(fam) == g.n ** 2 - orc.chi_eq - len(orc.skip_set) == fam.rank


def test_spanning_family_refuses():
    with pytest.raises(DomainError):
        spanning_family(complete_graph(6))
    with pytest.raises(DomainError):
        spanning_family(Graph(4, [(1, 2)]))


def test_verify_dimension_full(c5e, k33):
    assert verify_dimension(cycle_graph(5), "full")
    assert verify_dimension(k33, "full")
    P = point_matrix(k33)
    n = 6
    assert np.all(P[:, n * n + 2] == P[:, n * n + 3])     # w_3 = w_4
    assert minimal_equations_hold(k33, P)


def test_verify_dimension_spanning_path(fig2):
    assert verify_dimension(fig2, "spanning", samples=150)


@pytest.mark.parametrize("g", standing_graphs(6, 3))
def test_verify_dimension_paths_agree(g):
    assert verify_dimension(g, "full") and verify_dimension(g, "spanning", samples=100)


def test_minimal_equations_detect_violation(k33):
    P = point_matrix(k33)[:5].copy()
    P[0, 36 + 2] = 1 - P[0, 36 + 2]
    assert not minimal_equations_hold(k33, P)


# --- faces -----------------------------------------------------------------------

def test_nonnegativity_facets(c5e):
    for v in range(1, 6):
        for j in range(1, 6):
            assert c5e.face(nonneg(v, j)).status == "facet-verified"


def test_clique_facets(c5e):
    for e in c5e.g.edges:
        for j in range(1, 5):
            assert c5e.face(clique_cut(c5e.g, e, j)).status == "facet-verified"


def test_block_two_equals_nonneg_face(c5e, small):
    for E in [c5e] + small:
        n = E.g.n
        for v in range(2, n + 1):
            a = slacks(block_cut(v, 2, n), E.P, n) == 0
            b = slacks(nonneg(v, 1), E.P, n) == 0
            assert np.array_equal(a, b)


def test_block_facet_iff_smaller_coloring(c5e, small, k33):
    for E in [c5e, Enum(k33)] + small:
        n = E.g.n
        for v in E.g.vertices:
            for j in range(3, n - 1):
                facet = E.face(block_cut(v, j, n)).status == "facet-verified"
                assert facet == (exists_eqcol(E.g, j - 1) is not None)


def test_invalid_row_detected(c5e):
    r = clique_cut(c5e.g, (1, 2), 1)
    bad = CutRow("clique", r.params, r.coefs, -1)
    assert c5e.face(bad).status == "invalid"


def test_face_dims_equal_examples(c5e, small):
    r = nonneg(1, 1)
    assert face_dims_equal(c5e.g, r, r, orc=c5e.orc, points=c5e.P)
    assert not face_dims_equal(c5e.g, nonneg(2, 2), block_cut(2, 3, 5), orc=c5e.orc, points=c5e.P)
    checked = 0
    for E in small:
        g, n, chi = E.g, E.g.n, E.orc.chi_eq
        for u in g.vertices:
            S = tuple(sorted(g.adj[u]))
            if len(S) < 2 or g.is_clique(S):
                continue
            a = stability_number(g, S)
            for j in range(1, chi):
                if ceil(n / j) > ceil(n / chi):
                    ra = subneighborhood_cut(g, u, j, S, a, chi)
                    rb = subneighborhood_cut(g, u, chi, S, a, chi)
                    assert face_dims_equal(g, ra, rb, orc=E.orc, points=E.P)
                    checked += 1
    assert checked > 0


def test_format_verdict(c5e):
    v = c5e.face(nonneg(1, 1))
    assert format_verdict("c5", nonneg(1, 1), v).split("\t")[2:] == ["facet-verified", "21/21"]


# --- neighborhood families ------------------------------------------------------

def _neighborhood_rows(E):
    g, n, chi = E.g, E.g.n, E.orc.chi_eq
    for u in g.vertices:
        S = tuple(sorted(g.adj[u]))
        if len(S) < 2 or g.is_clique(S):
            continue
        yield u, S, stability_number(g, S)


def test_subneighborhood_dimension_bound(c5e, small):
    for E in [c5e] + small:
        g, n = E.g, E.g.n
        for u, S, a in _neighborhood_rows(E):
            for j in range(1, n):
                v = E.face(subneighborhood_cut(g, u, j, S, a, E.orc.chi_eq))
                assert v.status != "invalid"
                assert v.face_dim >= E.dim - (ceil(n / 2) - 1 - len(S) + g.degree(u))


def test_outside_neighborhood_bound_necessity_and_membership(c5e, small):
    for E in [c5e] + small:
        g, n, chi = E.g, E.g.n, E.orc.chi_eq
        skip = len(E.orc.skip_set)
        for u, S, a in _neighborhood_rows(E):
            for j in range(1, n // 2 + 1):
                row = outside_neighborhood_cut(g, u, j, chi)
                v = E.face(row)
                assert v.status != "invalid"
                assert v.face_dim >= E.dim - (3 * n - ceil(n / 2) - skip - chi - 4 - g.degree(u))
                if v.status == "facet-verified":
                    assert a >= n // max(j, chi)
                tight = slacks(row, E.P, n) == 0
                pred = [on_outside_neighborhood_face(g, c, u, j, chi) for c in E.colorings]
                assert np.array_equal(tight, pred)


def test_clique_neighborhood_bound_and_membership(c5e, small):
    checked = 0
    for E in [c5e] + small:
        g, n, chi = E.g, E.g.n, E.orc.chi_eq
        skip = len(E.orc.skip_set)
        for u, S, a in _neighborhood_rows(E):
            rest = [v for v in g.vertices if v not in g.closed_neighbors(u)]
            H = nx.Graph()
            H.add_nodes_from(rest)
            H.add_edges_from(e for e in g.edges if e[0] in rest and e[1] in rest)
            for Q in nx.find_cliques(H):
                for k in range(3, a + 2):
                    for j in range(1, ceil(n / (k - 1))):
                        row = clique_neighborhood_cut(g, u, j, k, Q, a)
                        v = E.face(row)
                        assert v.status != "invalid"
                        assert v.face_dim >= E.dim - (3 * n - skip - chi - n // 2 - g.degree(u) - len(Q) - 4)
                        tight = slacks(row, E.P, n) == 0
                        pred = [on_clique_neighborhood_face(g, c, u, j, k, Q, a) for c in E.colorings]
                        assert np.array_equal(tight, pred)
                        checked += 1
    assert checked > 0


def test_s_color_dimension_bound(c5e, small):
    for E in [c5e] + small[:1]:
        n = E.g.n
        for size in range(1, n):
            for S in itertools.combinations(range(1, n + 1), size):
                v = E.face(s_color_cut(S, n))
                m = len(set(S) - {n})
                assert v.status != "invalid"
                assert v.face_dim >= E.dim - (n - m - 1)


# --- larger fixtures through the generator -------------------------------------------

def test_fig1_rank_and_two_rank_facets(fig1):
    for row in (two_rank_cut(fig1, range(1, 8), (1, 2), 3), rank_cut(range(1, 8), 3, 2, 11)):
        v = verify_face(fig1, row, seed=1)
        assert v.status in ("facet-verified", "rank-bound-reached")
        assert v.status == "facet-verified", format_verdict("fig1", row, v)


def test_generator_detects_invalid(fig1):
    r = two_rank_cut(fig1, range(1, 8), (1, 2), 3)
    bad = CutRow(r.family, r.params, r.coefs, r.rhs - 1)
    assert verify_face(fig1, bad, effort=200).status == "invalid"
