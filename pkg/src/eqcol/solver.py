"""Cutting-plane loop at the root and cut-and-branch."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import InitBounds, initial_bounds, label_vertices
from .coloring import EqColoring, is_equitable
from .cuts import CutRow, violation
from .errors import InfeasibleConfigError
from .graph import Graph, complement, maximal_clique
from .lp import LPEngine, LPOutcome, make_engine
from .model import ModelSpec, build_formulation, cut_to_row, lazy_violations, project_row
from .separation import SeparationContext, get_strategy, run_strategy, format_cut_log

ROUND_TOL = 1e-6
DEFAULT_ROUNDS = 30


def ceil_bound(lb: float) -> int:
    return int(math.ceil(lb - ROUND_TOL))


@dataclass
class Limits:
    time_limit: float | None = None
    node_cap: int | None = None


@dataclass
class CutLoopReport:
    lb_trajectory: list[float]
    times: list[float]
    cut_counts: list[int]
    rounds_run: int
    cut_log: list[CutRow] = field(default_factory=list)
    log_lines: list[str] = field(default_factory=list)
    lazy_rows: int = 0

    @property
    def impr(self) -> int:
        return ceil_bound(self.lb_trajectory[-1]) - ceil_bound(self.lb_trajectory[0])

    @property
    def best_index(self) -> int:
        target = ceil_bound(self.lb_trajectory[-1])
        return next(i for i, lb in enumerate(self.lb_trajectory) if ceil_bound(lb) == target)

    @property
    def time_to_best(self) -> float:
        return self.times[self.best_index]

    @property
    def cuts_to_best(self) -> int:
        return self.cut_counts[self.best_index]


@dataclass
class SolveReport:
    status: str                       # "optimal" | "time-limit"
    chi_eq: int | None
    coloring: EqColoring | None
    nodes: int
    seconds: float
    root: CutLoopReport | None = None
    lb: int | None = None
    ub: int | None = None
    presolved: str | None = None
    work_graph: Graph | None = None   # relabeled graph the model and root cuts refer to

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _add_cuts(engine: LPEngine, cuts, ub: int, lb: int) -> int:
    idx = engine.model.index
    rows = []
    for c in cuts:
        pr = project_row(c, ub, lb)
        if pr.coefs:
            rows.append(cut_to_row(pr, idx))
    if rows:
        engine.add_rows(rows)
    return len(rows)


def _solve_checked(engine: LPEngine) -> LPOutcome:
    out = engine.solve()
    if out.status == "infeasible":
        raise InfeasibleConfigError("root LP relaxation is infeasible")
    if not out.optimal:
        raise RuntimeError(f"LP solve ended with status {out.status}")
    return out


def cutting_plane(g: Graph, model: ModelSpec, strategy, rounds: int = DEFAULT_ROUNDS, *,
                  ctx: SeparationContext | None = None, bounds: InitBounds | None = None,
                  engine: str | LPEngine = "highs"):
    """Run ``rounds`` iterations (LP solve + one separation round each).

    Returns ``(model', report)``; the loop stops early when a round finds
    neither strategy cuts nor violated lazy rows, and the trajectory is padded
    with its last value to ``rounds + 1`` entries.
    """
    strat = get_strategy(strategy) if not hasattr(strategy, "families") else strategy
    eng = make_engine(engine) if isinstance(engine, str) else engine
    if eng.model is None:
        eng.load(model)
    if ctx is None:
        b = bounds or initial_bounds(g)
        ctx = SeparationContext(g, model.lb, model.ub, b.alpha_lo, b.alpha_hi)
    t0 = time.perf_counter()
    out = _solve_checked(eng)
    traj, times, counts = [out.bound], [0.0], [0]
    log: list[CutRow] = []
    lines: list[str] = []
    lazy_total = 0
    done = 0
    for it in range(1, rounds + 1):
        p = out.point
        cuts = run_strategy(strat, ctx, p) if strat.families else []
        lazy = lazy_violations(eng.model, p)
        if not cuts and not lazy:
            break
        for c in cuts:
            lines.append(f"{it}\t" + format_cut_log(c, violation(c, p)))
        log.extend(cuts)
        _add_cuts(eng, cuts, ctx.ub, ctx.lb)
        if lazy:
            eng.add_rows(lazy)
            lazy_total += len(lazy)
        out = _solve_checked(eng)
        traj.append(out.bound)
        times.append(time.perf_counter() - t0)
        counts.append(counts[-1] + len(cuts))
        done = it
    while len(traj) < rounds + 1:
        traj.append(traj[-1])
        times.append(times[-1])
        counts.append(counts[-1])
    report = CutLoopReport(traj, times, counts, done, log, lines, lazy_total)
    return eng.current_model(), report


def _coloring_from_x(x: np.ndarray) -> EqColoring:
    colors = np.argmax(x, axis=1)
    classes = {}
    for v, j in enumerate(colors, start=1):
        classes.setdefault(int(j), []).append(v)
    return EqColoring(x.shape[0], tuple(tuple(c) for _, c in sorted(classes.items())))


def _most_fractional(vec: np.ndarray, cols) -> int | None:
    vals = vec[cols]
    dist = np.abs(vals - 0.5)
    frac = np.minimum(vals, 1 - vals) > ROUND_TOL
    if not frac.any():
        return None
    dist[~frac] = np.inf
    return int(cols[int(np.argmin(dist))])      # argmin keeps the lowest index on ties


def branch_and_bound(g: Graph, model: ModelSpec, incumbent: EqColoring, limits: Limits | None = None,
                     engine: str | LPEngine = "highs") -> SolveReport:
    """Depth-first branch and bound on the (possibly cut-strengthened) model."""
    limits = limits or Limits()
    t0 = time.perf_counter()
    eng = make_engine(engine) if isinstance(engine, str) else engine
    if eng.model is None or eng.model is not model:
        eng.load(model)
    idx = model.index
    root_lo, root_hi = model.col_lower.copy(), model.col_upper.copy()
    xcols = np.arange(idx.num_x)
    wcols = np.arange(idx.num_x, idx.num_cols)
    best = incumbent
    nodes = 0
    stack: list[tuple[tuple[int, float], ...]] = [()]
    applied: set[int] = set()
    status = "optimal"
    while stack:
        if limits.time_limit is not None and time.perf_counter() - t0 > limits.time_limit:
            status = "time-limit"
            break
        if limits.node_cap is not None and nodes >= limits.node_cap:
            status = "time-limit"
            break
        fix = stack.pop()
        if ceil_bound(model.lb) >= best.k:
            break
        cols = sorted(applied | {c for c, _ in fix})
        lo, hi = root_lo.copy(), root_hi.copy()
        for c, val in fix:
            lo[c] = hi[c] = val
        if cols:
            eng.set_col_bounds(cols, lo[cols], hi[cols])
        applied = {c for c, _ in fix}
        nodes += 1
        while True:
            out = eng.solve()
            if not out.optimal:
                break
            p = out.point
            if ceil_bound(out.bound) >= best.k:
                break
            x_int = bool(np.all(np.minimum(p.x, 1 - p.x) <= ROUND_TOL))
            if x_int:
                lazy = lazy_violations(eng.model, p)
                if lazy:
                    eng.add_rows(lazy)
                    continue
            break
        if not out.optimal or ceil_bound(out.bound) >= best.k:
            continue
        vec = out.point.vector
        if x_int:
            cand = _coloring_from_x(out.point.x)
            if cand.k < best.k and is_equitable(g, cand) and _proper(g, cand):
                best = cand
            col = _most_fractional(vec, wcols)
        else:
            col = _most_fractional(vec, xcols)
        if col is None:
            continue
        stack.append(fix + ((col, 1.0),))
        stack.append(fix + ((col, 0.0),))
    return SolveReport(status, best.k if status == "optimal" else None, best, nodes,
                       time.perf_counter() - t0)


def _proper(g: Graph, c: EqColoring) -> bool:
    return all(g.is_stable(cls) for cls in c.classes)


def _universal_presolve(g: Graph) -> EqColoring:
    """A vertex adjacent to everything sits alone, so every class has at most two
    vertices and the optimum pairs up a maximum matching of the complement."""
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(complement(g).edges)
    pairs = nx.max_weight_matching(h, maxcardinality=True)
    used = {v for e in pairs for v in e}
    classes = [tuple(sorted(e)) for e in pairs] + [(v,) for v in g.vertices if v not in used]
    return EqColoring(g.n, tuple(classes))


def cut_and_branch(g: Graph, strategy="S4", limits: Limits | None = None, *, rounds: int = DEFAULT_ROUNDS,
                   engine: str | LPEngine = "highs", force_ilp: bool = False) -> SolveReport:
    t0 = time.perf_counter()
    if not g.edges:
        c = EqColoring(g.n, (tuple(g.vertices),))
        return SolveReport("optimal", 1, c, 0, time.perf_counter() - t0, lb=1, ub=1, presolved="edgeless")
    if g.universal_vertices() and not force_ilp:
        c = _universal_presolve(g)
        return SolveReport("optimal", c.k, c, 0, time.perf_counter() - t0, lb=c.k, ub=c.k,
                           presolved="universal-vertex")
    perm = label_vertices(g, maximal_clique(g))
    h = g.relabel(list(perm))
    b = initial_bounds(h)
    model = build_formulation(h, b.lb, b.ub)
    eng = make_engine(engine) if isinstance(engine, str) else engine
    eng.load(model)
    ctx = SeparationContext(h, b.lb, b.ub, b.alpha_lo, b.alpha_hi)
    model2, root = cutting_plane(h, model, strategy, rounds, ctx=ctx, engine=eng)
    left = None
    if limits and limits.time_limit is not None:
        left = max(0.0, limits.time_limit - (time.perf_counter() - t0))
    rep = branch_and_bound(h, model2, b.ub_witness, Limits(left, limits.node_cap if limits else None),
                           engine=eng)
    back = {new: old for old, new in enumerate(perm, start=1)}
    col = rep.coloring.relabel_vertices(back) if rep.coloring is not None else None
    return SolveReport(rep.status, rep.chi_eq, col, rep.nodes, time.perf_counter() - t0, root, b.lb, b.ub,
                       work_graph=h)
