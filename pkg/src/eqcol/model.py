"""The assignment formulation restricted to colors ``1..ub``.

Columns: ``x_vj`` for ``v in 1..n, j in 1..ub`` (vertex major) followed by
``w_1..w_ub``.  Symmetry fixings ``x_vj = 0 (v < j)`` and ``w_j = 1 (j <= lb)``
are column bounds; the representative rows
``x_vj <= sum_{u=j-1}^{v-1} x_{u,j-1}`` are lazy and produced on demand by
:func:`lazy_violations`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .cuts import CutRow
from .errors import InfeasibleConfigError
from .graph import Graph

LAZY_TOL = 1e-6


@dataclass(frozen=True)
class VarIndex:
    n: int
    ub: int

    @property
    def num_x(self) -> int:
        return self.n * self.ub

    @property
    def num_cols(self) -> int:
        return self.n * self.ub + self.ub

    def x(self, v: int, j: int) -> int:
        return (v - 1) * self.ub + (j - 1)

    def w(self, j: int) -> int:
        return self.num_x + j - 1

    def name(self, col: int) -> str:
        if col < self.num_x:
            return f"x{col // self.ub + 1}_{col % self.ub + 1}"
        return f"w{col - self.num_x + 1}"

    def key(self, col: int) -> tuple:
        if col < self.num_x:
            return ("x", col // self.ub + 1, col % self.ub + 1)
        return ("w", col - self.num_x + 1)

    def col(self, key) -> int:
        return self.x(key[1], key[2]) if key[0] == "x" else self.w(key[1])


@dataclass(frozen=True)
class Row:
    cols: tuple[int, ...]
    vals: tuple[float, ...]
    sense: str          # "<=", ">=" or "=="
    rhs: float
    name: str = ""

    def activity(self, xvec: np.ndarray) -> float:
        return float(np.dot(xvec[list(self.cols)], self.vals)) if self.cols else 0.0

    def violation(self, xvec: np.ndarray) -> float:
        a = self.activity(xvec)
        if self.sense == "<=":
            return a - self.rhs
        if self.sense == ">=":
            return self.rhs - a
        return abs(a - self.rhs)


@dataclass(frozen=True)
class ModelSpec:
    graph: Graph
    index: VarIndex
    lb: int
    objective: np.ndarray
    col_lower: np.ndarray
    col_upper: np.ndarray
    rows: tuple[Row, ...]
    revision: int = 0
    family_counts: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.index.n

    @property
    def ub(self) -> int:
        return self.index.ub

    def with_rows(self, rows) -> "ModelSpec":
        rows = tuple(rows)
        if not rows:
            return self
        return replace(self, rows=self.rows + rows, revision=self.revision + 1)

    def to_lp_text(self) -> str:
        """CPLEX-style LP text, one row per line."""
        name = self.index.name
        out = [f"\\ equitable coloring model n={self.n} ub={self.ub} lb={self.lb} rev={self.revision}",
               "Minimize"]
        out.append(" obj: " + _terms(name, range(len(self.objective)), self.objective))
        out.append("Subject To")
        for i, r in enumerate(self.rows):
            sense = {"<=": "<=", ">=": ">=", "==": "="}[r.sense]
            out.append(f" {r.name or 'r' + str(i)}: {_terms(name, r.cols, r.vals)} {sense} {_g(r.rhs)}")
        out.append("Bounds")
        for c in range(self.index.num_cols):
            lo, hi = self.col_lower[c], self.col_upper[c]
            if lo == hi:
                out.append(f" {name(c)} = {_g(lo)}")
            else:
                out.append(f" {_g(lo)} <= {name(c)} <= {_g(hi)}")
        out.append("End")
        return "\n".join(out) + "\n"


def _g(v) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def _terms(name, cols, vals) -> str:
    parts = []
    for c, v in zip(cols, vals):
        if v == 0:
            continue
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        coef = "" if mag == 1 else _g(mag) + " "
        parts.append(f"{sign} {coef}{name(c)}")
    if not parts:
        return "0 " + name(0)
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


def _tel_terms(idx: VarIndex, coef: dict[int, float], start: int, sign: float):
    """``sign * sum_{k=start}^{ub} coef_k (w_k - w_{k+1})`` with ``w_{ub+1} = 0``."""
    out = {}
    prev = 0
    for k in range(start, idx.ub + 1):
        out[idx.w(k)] = sign * (coef[k] - prev)
        prev = coef[k]
    return out


def build_formulation(g: Graph, lb: int, ub: int) -> ModelSpec:
    """Root model over colors ``1..ub`` for a graph that is already labeled."""
    n = g.n
    if lb > ub:
        raise InfeasibleConfigError(f"lower bound {lb} exceeds upper bound {ub}")
    if ub < 1 or ub > n:
        raise InfeasibleConfigError(f"upper bound {ub} outside 1..{n}")
    idx = VarIndex(n, ub)
    rows: list[Row] = []
    counts = {}

    def add(fam, row):
        rows.append(row)
        counts[fam] = counts.get(fam, 0) + 1

    for v in g.vertices:
        cols = tuple(idx.x(v, j) for j in range(1, ub + 1))
        add("assign", Row(cols, (1.0,) * ub, "==", 1.0, f"assign_{v}"))
    for u, v in sorted(g.edges):
        for j in range(1, ub + 1):
            add("edge", Row((idx.x(u, j), idx.x(v, j), idx.w(j)), (1.0, 1.0, -1.0), "<=", 0.0, f"edge_{u}_{v}_{j}"))
    for j in range(1, ub):
        add("order", Row((idx.w(j + 1), idx.w(j)), (1.0, -1.0), "<=", 0.0, f"order_{j}"))
    for v in g.isolated_vertices():
        for j in range(1, ub + 1):
            add("isolated", Row((idx.x(v, j), idx.w(j)), (1.0, -1.0), "<=", 0.0, f"isol_{v}_{j}"))
    floors = {k: n // k for k in range(1, ub + 1)}
    ceils = {k: -(-n // k) for k in range(1, ub + 1)}
    for j in range(1, min(ub, n - 1) + 1):
        xs = [idx.x(v, j) for v in g.vertices]
        for fam, coef, sense in (("equity_lower", floors, ">="), ("equity_upper", ceils, "<=")):
            terms = _tel_terms(idx, coef, j, -1.0)
            cols = tuple(xs) + tuple(terms)
            vals = (1.0,) * n + tuple(terms.values())
            add(fam, Row(cols, vals, sense, 0.0, f"{fam}_{j}"))

    obj = np.zeros(idx.num_cols)
    obj[idx.num_x:] = 1.0
    lo = np.zeros(idx.num_cols)
    hi = np.ones(idx.num_cols)
    for v in g.vertices:
        for j in range(v + 1, ub + 1):
            hi[idx.x(v, j)] = 0.0
    for j in range(1, lb + 1):
        lo[idx.w(j)] = 1.0
    return ModelSpec(g, idx, lb, obj, lo, hi, tuple(rows), 0, counts)


def lazy_violations(model: ModelSpec, point, tol: float = LAZY_TOL) -> list[Row]:
    """Representative rows ``x_vj <= sum_{u=j-1}^{v-1} x_{u,j-1}`` violated by more than ``tol``."""
    idx = model.index
    x = np.asarray(point.x, dtype=float)
    out = []
    for j in range(2, idx.ub + 1):
        prev = x[:, j - 2]
        cum = np.concatenate([[0.0], np.cumsum(prev)])   # cum[i] = sum_{u<=i} x_{u,j-1}
        for v in range(j, model.n + 1):
            support = cum[v - 1] - cum[j - 2]
            if x[v - 1, j - 1] - support > tol:
                cols = (idx.x(v, j),) + tuple(idx.x(u, j - 1) for u in range(j - 1, v))
                vals = (1.0,) + (-1.0,) * (v - j + 1)
                out.append(Row(cols, vals, "<=", 0.0, f"repr_{v}_{j}"))
    return out


def project_row(row: CutRow, ub: int, lb: int = 0) -> CutRow:
    """Restrict a full-space row to colors ``1..ub`` (dropping variables fixed
    at zero) and move ``w_j`` with ``j <= lb`` (fixed at one) to the right."""
    coefs = {}
    rhs = row.rhs
    for key, c in row.coefs.items():
        j = key[2] if key[0] == "x" else key[1]
        if j > ub:
            continue
        if key[0] == "w" and j <= lb:
            rhs -= c
            continue
        coefs[key] = c
    return CutRow(row.family, row.params, coefs, rhs)


def cut_to_row(row: CutRow, idx: VarIndex) -> Row:
    """Model row for an already projected cut."""
    cols = tuple(idx.col(k) for k in row.coefs)
    return Row(cols, tuple(float(c) for c in row.coefs.values()), "<=", float(row.rhs), row.family)
