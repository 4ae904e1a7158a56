import numpy as np
import pytest

from eqcol.coloring import oracle
from eqcol.cuts import CutRow, W, X, block_cut, clique_cut, rank_cut, s_color_cut, validate_against_oracle
from eqcol.errors import InfeasibleConfigError
from eqcol.graph import Graph, complete_bipartite, cycle_graph
from eqcol.lp import FracPoint
from eqcol.model import build_formulation, cut_to_row, lazy_violations, project_row

from conftest import model_vector, rand_graph, sorted_colorings


def test_k33_row_counts(k33):
    m = build_formulation(k33, 2, 6)
    assert m.family_counts == {"assign": 6, "edge": 54, "order": 5, "equity_lower": 5, "equity_upper": 5}
    assert len(m.rows) == 75


def test_no_isolated_rows(c5):
    assert "isolated" not in build_formulation(c5, 1, 5).family_counts
    g = Graph(4, [(1, 2)])
    assert build_formulation(g, 1, 3).family_counts["isolated"] == 2 * 3


def test_last_equity_row(c5):
    m = build_formulation(c5, 1, 5)
    idx = m.index
    row = next(r for r in m.rows if r.name == "equity_upper_4")
    coefs = dict(zip(row.cols, row.vals))
    # sum_v x_v4 <= 2 w_4 - w_5
    assert coefs[idx.w(4)] == -2 and coefs[idx.w(5)] == 1 and row.rhs == 0
    assert all(coefs[idx.x(v, 4)] == 1 for v in range(1, 6))


def test_bounds_and_fixings(k33):
    m = build_formulation(k33, 2, 4)
    idx = m.index
    assert m.col_lower[idx.w(1)] == m.col_lower[idx.w(2)] == 1 and m.col_lower[idx.w(3)] == 0
    assert m.col_upper[idx.x(1, 2)] == 0 and m.col_upper[idx.x(2, 2)] == 1
    with pytest.raises(InfeasibleConfigError):
        build_formulation(k33, 5, 4)


@pytest.mark.parametrize("seed", range(6))
def test_integral_points_feasible(seed):
    g = rand_graph(6, 0.45, seed)
    ub = g.n - 1
    lb = oracle(g).chi_eq
    m = build_formulation(g, lb, ub)
    idx = m.index
    count = 0
    for c in sorted_colorings(g, ub):
        if c.k < lb:
            continue
        vec = model_vector(c, idx)
        assert np.all(vec >= m.col_lower) and np.all(vec <= m.col_upper)
        assert max(r.violation(vec) for r in m.rows) <= 1e-9
        assert float(m.objective @ vec) == c.k
        pt = FracPoint.from_vector(vec, idx, c.k)
        assert lazy_violations(m, pt) == []
        count += 1
    assert count > 0


def test_lazy_row_reported():
    g = cycle_graph(5)
    m = build_formulation(g, 1, 5)
    idx = m.index
    vec = np.zeros(idx.num_cols)
    vec[idx.x(1, 1)] = vec[idx.x(2, 1)] = 0.25
    vec[idx.x(3, 2)] = 1.0
    rows = lazy_violations(m, FracPoint.from_vector(vec, idx, 0))
    assert [r.name for r in rows] == ["repr_3_2"]
    assert rows[0].violation(vec) == pytest.approx(0.5)


def test_project_rank_unchanged_at_full_ub():
    r = rank_cut((1, 2, 3), 2, 2, 6)
    assert project_row(r, 6).coefs == r.coefs


def test_project_drops_high_colors():
    r = rank_cut((1, 2, 3), 2, 2, 6)
    p = project_row(r, 4)
    assert all((k[2] if k[0] == "x" else k[1]) <= 4 for k in p.coefs)
    assert X(1, 5) not in p.coefs and W(5) not in p.coefs and W(6) not in p.coefs


@pytest.mark.parametrize("seed", range(4))
def test_projection_sound(seed):
    g = rand_graph(6, 0.5, seed)
    lb = oracle(g).chi_eq
    ub = g.n - 1
    m = build_formulation(g, lb, ub)
    cuts = [s_color_cut({1, 2}, 6), s_color_cut({2, 4, 5}, 6), block_cut(3, 2, 6)]
    cuts += [clique_cut(g, e, 1) for e in g.edges][:3]
    for cut in cuts:
        assert validate_against_oracle(g, cut)
        row = cut_to_row(project_row(cut, ub, lb), m.index)
        for c in sorted_colorings(g, ub):
            if c.k >= lb:
                assert row.violation(model_vector(c, m.index)) <= 1e-9


def test_s_color_projection_moves_fixed_w():
    r = s_color_cut({1, 2}, 6)
    p = project_row(r, 6, lb=3)
    assert not any(k[0] == "w" and k[1] <= 3 for k in p.coefs)
    assert p.rhs == r.rhs - sum(c for k, c in r.coefs.items() if k[0] == "w" and k[1] <= 3)


def test_lp_text_export(k33):
    text = build_formulation(k33, 2, 3).to_lp_text()
    assert text.startswith("\\") and "Subject To" in text and text.rstrip().endswith("End")
    assert " w1 = 1" in text
