"""Valid inequalities for the equitable coloring polytope.

Every inequality is a :class:`CutRow` in canonical form ``sum(coef * var) <= rhs``
over the full color range ``1..n``.  Variables are keyed ``("x", v, j)`` and
``("w", j)``; right-hand sides that involve ``w`` are folded into the
coefficients, with the dummy ``w_{n+1} = 0`` dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .coloring import point_matrix
from .errors import DomainError
from .graph import Graph

VALIDATION_TOL = 1e-9


def X(v, j):
    return ("x", v, j)


def W(j):
    return ("w", j)


@dataclass(frozen=True)
class CutRow:
    family: str
    params: tuple = ()
    coefs: dict = field(default_factory=dict, compare=False, hash=False)
    rhs: float = 0

    def __post_init__(self):
        clean = {k: c for k, c in self.coefs.items() if c != 0}
        object.__setattr__(self, "coefs", dict(sorted(clean.items(), key=_var_order)))

    @property
    def key(self) -> tuple:
        return (tuple(self.coefs.items()), self.rhs)

    def evaluate(self, point) -> float:
        return row_value(self, point)

    def __str__(self):
        return serialize_row(self)


def _var_order(item):
    k = item[0]
    return (0, k[1], k[2]) if k[0] == "x" else (1, k[1], 0)


class _Acc(dict):
    def add(self, key, c):
        self[key] = self.get(key, 0) + c


def _tel(acc: _Acc, b: dict[int, int], start: int, n: int, sign: int = -1):
    """Fold ``sign * sum_{k>=start} b_k (w_k - w_{k+1})`` into ``acc``."""
    prev = 0
    for k in range(start, n + 1):
        acc.add(W(k), sign * (b[k] - prev))
        prev = b[k]


def _ceil(a, b):
    return -(-a // b)


# --- constructors ------------------------------------------------------------

def block_cut(v: int, j: int, n: int) -> CutRow:
    if not 1 <= j <= n:
        raise DomainError(f"block color {j} outside 1..{n}")
    acc = _Acc({X(v, k): 1 for k in range(j, n + 1)})
    acc.add(W(j), -1)
    return CutRow("block", (("v", v), ("j", j)), acc, 0)


def clique_cut(g: Graph, Q, j: int) -> CutRow:
    Q = tuple(sorted(Q))
    if len(Q) < 2 or not g.is_clique(Q):
        raise DomainError(f"{Q} is not a clique with at least two vertices")
    if not 1 <= j <= g.n - 1:
        raise DomainError(f"clique color {j} outside 1..{g.n - 1}")
    acc = _Acc({X(v, j): 1 for v in Q})
    acc.add(W(j), -1)
    return CutRow("clique", (("Q", Q), ("j", j)), acc, 0)


def rank_cut(S, j: int, alpha_S: int, n: int) -> CutRow:
    S = tuple(sorted(S))
    if alpha_S < 1 or not 1 <= j <= n - alpha_S:
        raise DomainError(f"rank cut needs 1 <= j <= n - alpha(S), got j={j}, alpha={alpha_S}")
    acc = _Acc({X(v, j): 1 for v in S})
    for v in range(1, n + 1):
        for k in range(n - alpha_S + 1, n):
            acc.add(X(v, k), 1)
    acc.add(W(j), -alpha_S)
    acc.add(W(n - alpha_S + 1), -1)
    acc.add(W(n), 1)
    return CutRow("rank", (("S", S), ("j", j), ("alpha", alpha_S)), acc, 0)


def _has_stable_triple(g: Graph, S) -> bool:
    return any(g.is_stable(t) for t in combinations(S, 3))


def two_rank_cut(g: Graph, S, Q, j: int) -> CutRow:
    """``sum_{S\\Q} x_vj + 2 sum_Q x_vj <= 2 w_j``; ``S`` includes ``Q``."""
    S, Q = tuple(sorted(S)), tuple(sorted(Q))
    if not Q or not set(Q) <= set(S):
        raise DomainError("Q must be a non-empty subset of S")
    for q in Q:
        if any(s != q and not g.has_edge(q, s) for s in S):
            raise DomainError(f"vertex {q} of Q is not adjacent to all of S")
    if len(S) <= 24 and _has_stable_triple(g, S):
        raise DomainError("S has stability number above 2")
    if not 1 <= j <= g.n - 1:
        raise DomainError(f"2-rank color {j} outside 1..{g.n - 1}")
    acc = _Acc({X(v, j): (2 if v in Q else 1) for v in S})
    acc.add(W(j), -2)
    return CutRow("2-rank", (("S", S), ("Q", Q), ("j", j)), acc, 0)


def subneighborhood_cut(g: Graph, u: int, j: int, S, alpha_S: int, chi: int) -> CutRow:
    """Subneighborhood inequality with ``gamma_k = min(ceil(n/chi), ceil(n/k), alpha_S)``.

    With the exact stability number and equitable chromatic number this is the
    textbook row; an upper bound on alpha together with a lower bound on chi
    gives the weaker row used by the separation routine.
    """
    n = g.n
    S = tuple(sorted(S))
    if not set(S) <= g.adj[u]:
        raise DomainError(f"S={S} is not contained in N({u})")
    if g.is_clique(S):
        raise DomainError("S must not be a clique")
    if not 1 <= j <= n - 1:
        raise DomainError(f"subneighborhood color {j} outside 1..{n - 1}")
    gam = {k: min(_ceil(n, chi), _ceil(n, k), alpha_S) for k in range(j, n + 1)}
    acc = _Acc({X(u, j): gam[j]})
    for v in S:
        acc.add(X(v, j), 1)
    for k in range(j + 1, n + 1):
        acc.add(X(u, k), gam[j] - gam[k])
    acc.add(W(j), -gam[j])
    return CutRow("subneighborhood", (("u", u), ("j", j), ("S", S), ("alpha", alpha_S), ("chi", chi)), acc, 0)


def outside_neighborhood_cut(g: Graph, u: int, j: int, chi: int) -> CutRow:
    n = g.n
    if not 1 <= j <= n // 2:
        raise DomainError(f"outside-neighborhood color {j} outside 1..{n // 2}")
    if g.is_clique(g.adj[u]):
        raise DomainError(f"N({u}) is a clique")
    t = max(j, chi)
    b = {k: n // t - n // k for k in range(t + 1, n + 1)}
    acc = _Acc({X(u, j): n // t - 1})
    for v in g.vertices:
        if v != u and v not in g.adj[u]:
            acc.add(X(v, j), -1)
    for k, bk in b.items():
        acc.add(X(u, k), bk)
    _tel(acc, b, t + 1, n)
    return CutRow("outside-neighborhood", (("u", u), ("j", j), ("chi", chi)), acc, 0)


def clique_neighborhood_b(n: int, j: int, k: int, alpha: int) -> dict[int, int]:
    b = {}
    for l in range(j, n + 1):
        if l <= _ceil(n, k) - 1:
            b[l] = min(_ceil(n, l), alpha + 1)
        elif l <= n - 2:
            b[l] = k
        else:
            b[l] = k + 1
    return b


def clique_neighborhood_cut(g: Graph, u: int, j: int, k: int, Q, alpha: int, strict: bool = True) -> CutRow:
    """``strict=False`` admits ``k = 2``, a degenerate member used only for
    domination comparisons."""
    n = g.n
    Q = tuple(sorted(Q))
    if not g.is_clique(Q) or not Q:
        raise DomainError(f"{Q} is not a clique")
    if set(Q) & g.closed_neighbors(u):
        raise DomainError(f"Q intersects N[{u}]")
    if not (3 if strict else 2) <= k <= alpha + 1:
        raise DomainError(f"need 3 <= k <= alpha + 1, got k={k}, alpha={alpha}")
    if not 1 <= j <= _ceil(n, k - 1) - 1:
        raise DomainError(f"need 1 <= j <= ceil(n/(k-1)) - 1, got j={j}")
    acc = _Acc({X(u, j): k - 1})
    for l in range(_ceil(n, k - 1), n - 1):
        acc.add(X(u, l), k - _ceil(n, l))
    acc.add(X(u, n - 1), k - 1)
    acc.add(X(u, n), k - 1)
    for v in sorted(g.adj[u] | set(Q)):
        acc.add(X(v, j), 1)
    for v in g.vertices:
        if v != u:
            acc.add(X(v, n - 1), 1)
            acc.add(X(v, n), 1)
    _tel(acc, clique_neighborhood_b(n, j, k, alpha), j, n)
    return CutRow("clique-neighborhood", (("u", u), ("j", j), ("k", k), ("Q", Q), ("alpha", alpha)), acc, 0)


def s_color_b(S, n: int) -> dict[int, int]:
    S = set(S)
    b = {}
    d = 0
    for k in range(1, n + 1):
        d += k in S
        b[k] = d * (n // k) + min(d, n - k * (n // k))
    return b


def s_color_cut(S, n: int) -> CutRow:
    S = tuple(sorted(set(S)))
    if not S or any(not 1 <= j <= n for j in S):
        raise DomainError(f"S-color set must be a non-empty subset of 1..{n}")
    acc = _Acc()
    for j in S:
        for v in range(1, n + 1):
            acc.add(X(v, j), 1)
    _tel(acc, s_color_b(S, n), 1, n)
    return CutRow("S-color", (("S", S),), acc, 0)


def nonnegativity_row(v: int, j: int) -> CutRow:
    """``x_vj >= 0`` written as ``-x_vj <= 0``."""
    return CutRow("nonneg", (("v", v), ("j", j)), {X(v, j): -1}, 0)


def lower_equity_row(j: int, n: int) -> CutRow:
    """Formulation row ``sum_v x_vj >= sum_{k>=j} floor(n/k)(w_k - w_{k+1})``."""
    acc = _Acc({X(v, j): -1 for v in range(1, n + 1)})
    _tel(acc, {k: n // k for k in range(j, n + 1)}, j, n, sign=+1)
    return CutRow("equity-lower", (("j", j),), acc, 0)


def upper_equity_row(j: int, n: int) -> CutRow:
    acc = _Acc({X(v, j): 1 for v in range(1, n + 1)})
    _tel(acc, {k: _ceil(n, k) for k in range(j, n + 1)}, j, n)
    return CutRow("equity-upper", (("j", j),), acc, 0)


# --- evaluation --------------------------------------------------------------

def row_value(row: CutRow, point) -> float:
    """Left-hand side at ``point`` (a FracPoint or BinaryPoint); variables
    beyond the point's color range count as zero."""
    x, w = np.asarray(point.x), np.asarray(point.w)
    total = 0.0
    for key, c in row.coefs.items():
        if key[0] == "x":
            v, j = key[1], key[2]
            if j <= x.shape[1]:
                total += c * x[v - 1, j - 1]
        elif key[1] <= w.shape[0]:
            total += c * w[key[1] - 1]
    return total


def violation(row: CutRow, point) -> float:
    """``lhs - rhs``; positive means the point violates the row."""
    return row_value(row, point) - row.rhs


def dense_row(row: CutRow, n: int, dtype=np.int64) -> np.ndarray:
    """Coefficient vector in the flattened ``(x, w)`` layout of size ``n^2 + n``."""
    a = np.zeros(n * n + n, dtype=dtype)
    for key, c in row.coefs.items():
        if key[0] == "x":
            a[(key[1] - 1) * n + key[2] - 1] = c
        else:
            a[n * n + key[1] - 1] = c
    return a


def slacks(row: CutRow, points: np.ndarray, n: int) -> np.ndarray:
    """``rhs - lhs`` for each row of the integer point matrix."""
    return row.rhs - points.astype(np.int64) @ dense_row(row, n)


def validate_against_oracle(g: Graph, row: CutRow, points: np.ndarray | None = None) -> bool:
    """True iff no equitable coloring of ``g`` violates ``row`` by more than 1e-9."""
    pts = point_matrix(g) if points is None else points
    if len(pts) == 0:
        return True
    if all(float(c).is_integer() for c in row.coefs.values()) and float(row.rhs).is_integer():
        return bool(slacks(row, pts, g.n).min() >= 0)
    lhs = pts.astype(float) @ dense_row(row, g.n, float)
    return bool((lhs - row.rhs).max() <= VALIDATION_TOL)


# --- text form -----------------------------------------------------------------

def _fmt_var(key):
    return f"x{key[1]}_{key[2]}" if key[0] == "x" else f"w{key[1]}"


def _fmt_param(v):
    if isinstance(v, tuple):
        return "{" + ",".join(map(str, v)) + "}"
    return str(v)


def serialize_row(row: CutRow) -> str:
    """``family[p=v;...] <terms> <= rhs`` on one line."""
    params = ";".join(f"{k}={_fmt_param(v)}" for k, v in row.params)
    terms = " ".join(f"{'+' if c >= 0 else '-'} {abs(c)} {_fmt_var(k)}" for k, c in row.coefs.items())
    return f"{row.family}[{params}] {terms or '0'} <= {row.rhs}"


_TERM = re.compile(r"([+-])\s*([0-9.eE+-]+)\s+(x(\d+)_(\d+)|w(\d+))")


def _num(s):
    f = float(s)
    return int(f) if f.is_integer() else f


def _parse_param(v):
    if v.startswith("{"):
        body = v[1:-1]
        return tuple(int(t) for t in body.split(",") if t)
    return _num(v)


def parse_row(text: str) -> CutRow:
    m = re.match(r"\s*([\w-]+)\[(.*?)\]\s*(.*)<=\s*(\S+)\s*$", text)
    if not m:
        raise ValueError(f"cannot parse cut row: {text!r}")
    family, ptxt, body, rhs = m.groups()
    params = tuple((k, _parse_param(v)) for k, v in (p.split("=", 1) for p in ptxt.split(";") if p))
    coefs = {}
    for sign, c, _, xv, xj, wj in _TERM.findall(body):
        val = _num(c) * (-1 if sign == "-" else 1)
        key = X(int(xv), int(xj)) if xv else W(int(wj))
        coefs[key] = val
    return CutRow(family, params, coefs, _num(rhs))
