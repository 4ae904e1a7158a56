"""Separation routines for the cut families and the nested strategies S1..S7."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .cuts import (CutRow, block_cut, clique_cut, clique_neighborhood_cut, outside_neighborhood_cut,
                   s_color_cut, subneighborhood_cut, two_rank_cut, violation)
from .errors import DomainError
from .graph import Graph, extend_clique
from .model import project_row

SEP_TOL = 1e-5
FAMILY_CAP = 50
ROUND_CAP = 200
POOL_CAP = 60

FAMILIES = ("clique", "2-rank", "block", "S-color", "subneighborhood",
            "outside-neighborhood", "clique-neighborhood")


@dataclass(frozen=True)
class Strategy:
    name: str
    families: tuple[str, ...]


STRATEGIES = {f"S{i}": Strategy(f"S{i}", FAMILIES[:i]) for i in range(1, 8)}


def get_strategy(strategy) -> Strategy:
    if isinstance(strategy, Strategy):
        return strategy
    try:
        return STRATEGIES[str(strategy).upper()]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; expected S1..S7") from None


@dataclass
class SeparationContext:
    graph: Graph
    lb: int
    ub: int
    alpha_lo: tuple[int, ...]
    alpha_hi: tuple[int, ...]
    clique_pool: dict = field(default_factory=dict)   # tuple -> None, insertion ordered
    tol: float = SEP_TOL
    family_cap: int = FAMILY_CAP
    round_cap: int = ROUND_CAP
    pool_cap: int = POOL_CAP

    @classmethod
    def from_bounds(cls, g: Graph, bounds, ub: int | None = None, **kw) -> "SeparationContext":
        return cls(g, bounds.lb, bounds.ub if ub is None else ub, bounds.alpha_lo, bounds.alpha_hi, **kw)

    def remember(self, clique) -> None:
        q = tuple(sorted(clique))
        if q not in self.clique_pool and len(self.clique_pool) < self.pool_cap:
            self.clique_pool[q] = None


def _keep(ctx: SeparationContext, rows, p) -> list[CutRow]:
    """Violated rows, most violated first, deduplicated, capped."""
    scored = {}
    for r in rows:
        v = violation(r, p)
        if v > ctx.tol and r.key not in scored:
            scored[r.key] = (v, r)
    best = sorted(scored.values(), key=lambda t: -t[0])
    return [r for _, r in best[: ctx.family_cap]]


def _colors(ctx: SeparationContext, p) -> range:
    return range(1, min(ctx.ub, p.x.shape[1], ctx.graph.n - 1) + 1)


# --- clique and block --------------------------------------------------------

def separate_cliques(ctx: SeparationContext, p) -> list[CutRow]:
    g = ctx.graph
    x, w = np.asarray(p.x), np.asarray(p.w)
    rows = []
    for j in _colors(ctx, p):
        col = x[:, j - 1]
        seen = set()
        seeds = sorted((v for v in g.vertices if col[v - 1] > ctx.tol), key=lambda v: (-col[v - 1], v))
        for s in seeds:
            if s in seen or not g.adj[s]:
                continue
            # heaviest common neighbor first; zero-weight vertices still extend to maximality
            cl = extend_clique(g, (s,), key=lambda v: (col[v - 1], -v))
            seen.update(cl)
            if len(cl) < 2:
                continue
            ctx.remember(cl)
            if col[[v - 1 for v in cl]].sum() > w[j - 1] + ctx.tol:
                rows.append(clique_cut(g, cl, j))
    return _keep(ctx, rows, p)


def separate_blocks(ctx: SeparationContext, p) -> list[CutRow]:
    n = ctx.graph.n
    x, w = np.asarray(p.x), np.asarray(p.w)
    k = x.shape[1]
    tails = np.cumsum(x[:, ::-1], axis=1)[:, ::-1]      # tails[v, j-1] = sum_{l>=j} x_vl
    rows = []
    for j in range(2, k + 1):
        for v in range(j, n + 1):
            if tails[v - 1, j - 1] > w[j - 1] + ctx.tol:
                rows.append(block_cut(v, j, n))
    return _keep(ctx, rows, p)


# --- 2-rank ------------------------------------------------------------------

def _two_rank_build(g: Graph, col, allowed: set[int]):
    """Greedy (S, Q) for one color, or None when no seed pair exists."""
    best = None
    for a, b in combinations(sorted(allowed), 2):
        s = col[a - 1] + col[b - 1]
        if s < 1 and (best is None or s > best[0]):
            best = (s, a, b)
    if best is None:
        return None
    S = [best[1], best[2]]
    Q: list[int] = []
    pool = sorted(allowed - set(S), key=lambda v: (-col[v - 1], v))
    while True:
        added = False
        for v in pool:
            if v in S or any(not g.has_edge(v, q) for q in Q):
                continue
            # keep alpha(S + v) <= 2: v must not close a stable triple
            non = [s for s in S if not g.has_edge(v, s)]
            if any(not g.has_edge(a, b) for a, b in combinations(non, 2)):
                continue
            if not non:
                Q.append(v)
            S.append(v)
            added = True
            break
        if not added:
            break
    Q = [q for q in S if all(s == q or g.has_edge(q, s) for s in S)]
    return tuple(sorted(S)), tuple(sorted(Q))


def separate_two_rank(ctx: SeparationContext, p) -> list[CutRow]:
    g = ctx.graph
    x = np.asarray(p.x)
    rows = []
    for j in _colors(ctx, p):
        col = x[:, j - 1]
        forbidden: set[int] = set()
        while g.n - len(forbidden) > 5:
            built = _two_rank_build(g, col, set(g.vertices) - forbidden)
            if built is None:
                break
            S, Q = built
            forbidden.update(S)
            if Q:
                rows.append(two_rank_cut(g, S, Q, j))
    return _keep(ctx, rows, p)


# --- S-color -----------------------------------------------------------------

def separate_s_color(ctx: SeparationContext, p) -> list[CutRow]:
    n = ctx.graph.n
    x, w = np.asarray(p.x), np.asarray(p.w)
    tol = ctx.tol
    pos = np.flatnonzero(w > tol)
    if pos.size == 0:
        return []
    t = int(pos[-1]) + 1
    if w[t - 1] >= 1 - tol:
        return []
    rem = [n - k * (n // k) for k in range(1, t + 1) if n % k]
    if not rem:
        return []
    s_min = max(2, 1 + min(rem))
    frac = ((x > tol) & (x < 1 - tol)).sum(axis=0)
    order = sorted(range(1, t + 1), key=lambda j: (-int(frac[j - 1]), j))
    forbidden: set[int] = set()
    rows = []
    while len(order) - len(forbidden) > 2:
        free = [j for j in order if j not in forbidden]
        best = None
        for s in range(s_min, t - 1):
            if s > len(free):
                break
            row = s_color_cut(free[:s], n)
            v = violation(row, p)
            if best is None or v > best[0]:
                best = (v, row, free[0])
        if best is None:
            break
        rows.append(best[1])
        forbidden.add(best[2])
    return _keep(ctx, rows, p)


# --- neighborhood families ---------------------------------------------------

def separate_subneighborhood(ctx: SeparationContext, p) -> list[CutRow]:
    g = ctx.graph
    rows = []
    for u in g.vertices:
        if ctx.alpha_lo[u - 1] < 3:
            continue
        S = tuple(sorted(g.adj[u]))
        for j in _colors(ctx, p):
            rows.append(subneighborhood_cut(g, u, j, S, ctx.alpha_hi[u - 1], ctx.lb))
    return _keep(ctx, rows, p)


def separate_outside_neighborhood(ctx: SeparationContext, p) -> list[CutRow]:
    g = ctx.graph
    n = g.n
    rows = []
    for u in g.vertices:
        a = ctx.alpha_lo[u - 1]
        if a < 3:
            continue
        for j in _colors(ctx, p):
            if j > n // 2 or a < n // max(j, ctx.lb):
                continue
            rows.append(outside_neighborhood_cut(g, u, j, ctx.lb))
    return _keep(ctx, rows, p)


def separate_clique_neighborhood(ctx: SeparationContext, p) -> list[CutRow]:
    g = ctx.graph
    n = g.n
    rows = []
    k_lo = max(3, -(-n // ctx.ub))
    for Q in ctx.clique_pool:
        covered = set().union(*(g.closed_neighbors(q) for q in Q))
        for u in g.vertices:
            if u in covered:
                continue
            ah = ctx.alpha_hi[u - 1]
            for j in _colors(ctx, p):
                k_hi = min(-(-n // j), -(-n // ctx.lb), ah + 1)
                for k in range(k_lo, k_hi + 1):
                    try:
                        rows.append(clique_neighborhood_cut(g, u, j, k, Q, ah))
                    except DomainError:
                        continue
    return _keep(ctx, rows, p)


ROUTINES = {
    "clique": separate_cliques,
    "2-rank": separate_two_rank,
    "block": separate_blocks,
    "S-color": separate_s_color,
    "subneighborhood": separate_subneighborhood,
    "outside-neighborhood": separate_outside_neighborhood,
    "clique-neighborhood": separate_clique_neighborhood,
}


def run_strategy(strategy, ctx: SeparationContext, p) -> list[CutRow]:
    """Union of the enabled families' cuts in family order, deduplicated on the
    projected row and capped at ``ctx.round_cap``."""
    strat = get_strategy(strategy)
    out, keys = [], set()
    for fam in FAMILIES:
        if fam not in strat.families:
            continue
        for row in ROUTINES[fam](ctx, p):
            key = project_row(row, ctx.ub, ctx.lb).key
            if key in keys:
                continue
            keys.add(key)
            out.append(row)
            if len(out) >= ctx.round_cap:
                return out
    return out


def format_cut_log(row: CutRow, viol: float) -> str:
    params = ";".join(f"{k}={v}" for k, v in row.params)
    return f"{row.family}\t{params}\t{viol:.6f}"
