import sys

import numpy as np
import pytest
from scipy.optimize import linprog

from eqcol.bounds import initial_bounds, label_vertices
from eqcol.lp import (DenseSimplex, ExternalCommandEngine, HighsEngine, make_engine, read_lp_text,
                      resolve_with_rows, solve_lp)
from eqcol.model import Row, build_formulation

from conftest import rand_graph

REF = f"{sys.executable} -m eqcol.reference_solver {{lp}} {{sol}}"


def test_single_fixed_variable():
    st, x, obj = DenseSimplex([1.0], [[1.0], [1.0]], [">=", "<="], [1.0, 1.0], [0.0], [5.0]).solve()
    assert st == "optimal" and obj == pytest.approx(1.0)


def test_two_variable_vertex():
    # max x + y  s.t. x + 2y <= 4, 3x + y <= 6  -> (8/5, 6/5), value 14/5
    st, x, obj = DenseSimplex([-1, -1], [[1, 2], [3, 1]], ["<=", "<="], [4, 6], [0, 0], [np.inf, np.inf]).solve()
    assert st == "optimal"
    assert obj == pytest.approx(-14 / 5) and x[:2] == pytest.approx([8 / 5, 6 / 5])


def test_infeasible_detected():
    st, x, obj = DenseSimplex([1, 1], [[1, 1]], [">="], [3], [0, 0], [1, 1]).solve()
    assert st == "infeasible"


def test_degenerate_cycling_example():
    # Beale's example cycles under naive Dantzig pricing
    c = [-0.75, 150, -0.02, 6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    st, x, obj = DenseSimplex(c, A, ["<="] * 3, [0, 0, 1], [0] * 4, [np.inf] * 4).solve()
    ref = linprog(c, A_ub=A, b_ub=[0, 0, 1], bounds=[(0, None)] * 4, method="highs")
    assert st == "optimal" and obj == pytest.approx(ref.fun, abs=1e-9)


@pytest.mark.parametrize("seed", range(40))
def test_random_lp_against_scipy(seed):
    r = np.random.default_rng(seed)
    m, n = r.integers(2, 8), r.integers(2, 8)
    A = r.integers(-3, 4, size=(m, n)).astype(float)
    b = r.integers(0, 6, size=m).astype(float)
    c = r.integers(-4, 5, size=n).astype(float)
    hi = r.integers(1, 4, size=n).astype(float)
    senses = r.choice(["<=", ">=", "=="], size=m, p=[0.6, 0.3, 0.1]).tolist()
    st, x, obj = DenseSimplex(c, A, senses, b, np.zeros(n), hi).solve()
    ub_rows = [(A[i], b[i]) if s == "<=" else (-A[i], -b[i]) for i, s in enumerate(senses) if s != "=="]
    eq = [i for i, s in enumerate(senses) if s == "=="]
    ref = linprog(c, A_ub=np.array([a for a, _ in ub_rows]) if ub_rows else None,
                  b_ub=np.array([v for _, v in ub_rows]) if ub_rows else None,
                  A_eq=A[eq] if eq else None, b_eq=b[eq] if eq else None,
                  bounds=list(zip(np.zeros(n), hi)), method="highs")
    if ref.status == 2:
        assert st == "infeasible"
    else:
        assert st == "optimal" and obj == pytest.approx(ref.fun, abs=1e-7)


def test_k33_root_sandwich(k33):
    g = k33.relabel(list(label_vertices(k33)))
    b = initial_bounds(g)
    m = build_formulation(g, b.lb, b.ub)
    out = solve_lp(m, "embedded")
    assert out.optimal and b.lb - 1e-7 <= out.objective <= 2 + 1e-7


def _models():
    for seed in range(12):
        g = rand_graph(7, 0.2 + 0.05 * seed, seed)
        yield build_formulation(g, 1, g.n)


@pytest.mark.parametrize("m", list(_models()))
def test_engines_agree(m):
    a, b = solve_lp(m, "embedded"), solve_lp(m, "highs")
    assert a.optimal and b.optimal
    assert a.objective == pytest.approx(b.objective, abs=1e-6)
    for out in (a, b):
        assert max(r.violation(out.point.vector) for r in m.rows) <= 1e-6


def test_external_command_engine(c5):
    m = build_formulation(c5, 1, 5)
    out = solve_lp(m, ExternalCommandEngine(REF))
    assert out.optimal and out.objective == pytest.approx(solve_lp(m, "highs").objective, abs=1e-6)


def test_lp_text_round_trip(k33):
    m = build_formulation(k33, 2, 4)
    names, c, A, senses, b, lo, hi = read_lp_text(m.to_lp_text())
    assert len(names) == m.index.num_cols and A.shape == (len(m.rows), len(names))
    st, x, obj = DenseSimplex(c, A, senses, b, lo, hi).solve()
    assert obj == pytest.approx(solve_lp(m, "highs").objective, abs=1e-7)


@pytest.mark.parametrize("engine", ["embedded", "highs"])
def test_implied_row_keeps_objective(engine, c5):
    m = build_formulation(c5, 1, 5)
    eng = make_engine(engine)
    eng.load(m)
    base = eng.solve().objective
    # w_1 <= 1 is implied by the bounds
    again = resolve_with_rows(eng, [Row((m.index.w(1),), (1.0,), "<=", 1.0)])
    assert again.objective == pytest.approx(base, abs=1e-9)


@pytest.mark.parametrize("engine", ["embedded", "highs"])
def test_impossible_row_infeasible(engine, c5):
    m = build_formulation(c5, 1, 5)
    eng = make_engine(engine)
    eng.load(m)
    eng.solve()
    out = resolve_with_rows(eng, [Row((m.index.x(1, 1),), (1.0,), ">=", 2.0)])
    assert out.status == "infeasible" and not out.optimal


def test_column_bounds_branching(c5):
    m = build_formulation(c5, 1, 5)
    eng = HighsEngine()
    eng.load(m)
    eng.set_col_bounds([m.index.w(3)], 0.0, 0.0)
    out = eng.solve()
    # two colors cannot colour C5
    assert out.status == "infeasible"


def test_unknown_engine():
    with pytest.raises(ValueError):
        make_engine("cplex")
