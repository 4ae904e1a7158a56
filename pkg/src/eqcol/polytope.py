"""Machine checks on the equitable coloring polytope.

Ranks are affine ranks of 0/1 point sets: the linear rank of the points
lifted by a trailing 1.  A double-precision QR with column pivoting proposes
an independent subset; exact rational elimination then certifies both that the
subset is independent and, through an exact null-space basis, that every
other point lies in its span.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np
from scipy.linalg import qr

from .coloring import (ENUMERATION_LIMIT, EqColoring, OracleResult, intro, oracle, point_matrix,
                       random_eqcol, swap, to_binary)
from .cuts import CutRow, dense_row, slacks
from .errors import DomainError
from .graph import Graph, stability_number

FLOAT_PIVOT_TOL = 1e-8


# --- exact rank ----------------------------------------------------------------

def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [a / piv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _integer_nullspace(rref: list[list[Fraction]], pivots: list[int], ncols: int) -> np.ndarray:
    """Columns spanning ``{y : R y = 0}`` scaled to integers (object dtype)."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((ncols, len(free)), dtype=object)
    for t, f in enumerate(free):
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, pc in zip(rref, pivots):
            vec[pc] = -row[f]
        scale = lcm(*(v.denominator for v in vec))
        basis[:, t] = [int(v * scale) for v in vec]
    return basis


def _lift(points) -> np.ndarray:
    P = np.asarray(points)
    if P.ndim == 1:
        P = P[None, :]
    return np.hstack([P.astype(np.int64), np.ones((P.shape[0], 1), dtype=np.int64)])


def exact_rank(M: np.ndarray, return_rows: bool = False):
    """Exact linear rank of an integer matrix (rows are vectors)."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0 or not M.any():
        return (0, []) if return_rows else 0
    sel: list[int] = []
    # float proposal
    R = qr(M.T.astype(float), mode="r", pivoting=True)
    diag = np.abs(np.diag(R[0]))
    cutoff = FLOAT_PIVOT_TOL * max(diag.max(initial=0.0), 1.0)
    sel = sorted(int(i) for i in R[1][: int((diag > cutoff).sum())])
    while True:
        rows = [[Fraction(int(a)) for a in M[i]] for i in sel]
        rref, pivots = _rref(rows)
        if len(pivots) < len(sel):
            # keep an independent subset of the proposal
            keep, acc = [], []
            for i in sel:
                trial, piv = _rref(acc + [[Fraction(int(a)) for a in M[i]]])
                if len(piv) > len(acc):
                    keep.append(i)
                    acc = trial
            sel = keep
            rref, pivots = _rref([[Fraction(int(a)) for a in M[i]] for i in sel])
        N = _integer_nullspace(rref, pivots, M.shape[1])
        if N.shape[1] == 0:
            break
        big = max(abs(int(a)) for a in N.ravel()) if N.size else 0
        if big * M.shape[1] < 2 ** 62:
            prod = M @ N.astype(np.int64)
        else:
            prod = M.astype(object) @ N
        bad = np.flatnonzero(np.any(prod != 0, axis=1))
        if bad.size == 0:
            break
        sel = sorted(set(sel) | {int(i) for i in bad[:8]})
    return (len(sel), sel) if return_rows else len(sel)


def affine_rank(points) -> int:
    """Size of a largest affinely independent subset of ``points``."""
    P = np.asarray(points)
    if P.size == 0:
        return 0
    return exact_rank(_lift(P))


def float_affine_rank(points, tol: float = FLOAT_PIVOT_TOL) -> int:
    """Double-precision screen; never used to certify."""
    L = _lift(points).astype(float)
    return int(np.linalg.matrix_rank(L, tol=tol * max(1.0, np.abs(L).max())))


@dataclass
class AffineFamily:
    points: np.ndarray                # one 0/1 point per row
    colorings: list[EqColoring] = field(default_factory=list)
    _rank: int | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = affine_rank(self.points)
        return self._rank

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FaceVerdict:
    status: str        # invalid | valid-face | facet-verified | rank-bound-reached
    rank: int          # affine rank reached on the face
    dim_ecp: int
    on_face: int = 0
    off_face: int = 0

    @property
    def face_dim(self) -> int:
        return self.rank - 1


# --- dimension -----------------------------------------------------------------

def ecp_dimension(g: Graph, orc: OracleResult | None = None) -> int:
    orc = orc or oracle(g)
    return g.n * g.n - (orc.chi_eq + len(orc.skip_set) + 1)


def standing_assumptions(g: Graph, orc: OracleResult | None = None) -> bool:
    """At least five vertices, an edge, no universal vertex and 2 <= chi_eq <= n - 2."""
    if g.n < 5 or not g.edges or g.universal_vertices():
        return False
    orc = orc or oracle(g)
    return 2 <= orc.chi_eq <= g.n - 2


def _points(colorings) -> np.ndarray:
    return np.array([to_binary(c).vector() for c in colorings], dtype=np.int64)


def spanning_family(g: Graph, orc: OracleResult | None = None) -> AffineFamily:
    """The n^2 - chi_eq - |S| colorings built from one (n-1)-eqcol."""
    n = g.n
    orc = orc or oracle(g)
    if n < 5 or not 2 <= orc.chi_eq <= n - 2:
        raise DomainError("construction needs n >= 5 and 2 <= chi_eq <= n - 2")
    u1, u2 = next((a, b) for a in g.vertices for b in g.vertices if a < b and not g.has_edge(a, b))
    rest = [(v,) for v in g.vertices if v not in (u1, u2)]
    c = EqColoring(n, tuple(rest) + ((u1, u2),))
    fam = [c]
    fam += [swap(c, (n - 1, j)) for j in range(1, n - 1)]
    c1 = intro(c, u1)
    fam.append(c1)
    fam += [swap(c1, (n, j, jp)) for j in range(1, n) for jp in range(1, n) if jp != j]
    fam += [swap(c1, (n, j)) for j in range(1, n)]
    fam += [orc.witnesses[k] for k in range(orc.chi_eq, n - 1) if k not in orc.skip_set]
    return AffineFamily(_points(fam), fam)


def minimal_equations_hold(g: Graph, P: np.ndarray, orc: OracleResult | None = None) -> bool:
    """Every row of ``P`` satisfies the minimal equation system of the polytope."""
    n = g.n
    orc = orc or oracle(g)
    if len(P) == 0:
        return True
    x = P[:, : n * n].reshape(-1, n, n).astype(np.int64)
    w = P[:, n * n:].astype(np.int64)
    ok = np.all(x.sum(axis=2) == 1)
    ok &= np.all(w[:, : orc.chi_eq] == 1)
    for j in orc.skip_set:
        if j < n:
            ok &= np.all(w[:, j - 1] == w[:, j])
    ok &= np.all(x[:, :, n - 1].sum(axis=1) == w[:, n - 1])
    return bool(ok)


def sample_points(g: Graph, orc: OracleResult, count: int, seed: int = 0) -> np.ndarray:
    """Random equitable colorings over all feasible k with shuffled color labels."""
    rng = random.Random(seed)
    ks = orc.feasible_k
    out = []
    for _ in range(count):
        k = rng.choice(ks)
        c = random_eqcol(g, k, rng) or orc.witnesses[k]
        perm = list(range(k))
        rng.shuffle(perm)
        out.append(EqColoring(g.n, tuple(c.classes[p] for p in perm)))
    return _points(out)


def verify_dimension(g: Graph, path: str = "auto", samples: int = 400) -> bool:
    orc = oracle(g)
    dim = ecp_dimension(g, orc)
    if path == "auto":
        path = "full" if g.n <= ENUMERATION_LIMIT else "spanning"
    if path == "full":
        P = point_matrix(g)
        return affine_rank(P) == dim + 1 and minimal_equations_hold(g, P, orc)
    fam = spanning_family(g, orc)
    P = np.vstack([fam.points, sample_points(g, orc, samples)])
    return fam.rank == dim + 1 and len(fam) == dim + 1 and minimal_equations_hold(g, P, orc)


# --- faces ---------------------------------------------------------------------

def _face_moves(c: EqColoring, rng: random.Random) -> list[EqColoring]:
    k = c.k
    out = []
    if k >= 2:
        a, b = rng.sample(range(1, k + 1), 2)
        out.append(swap(c, (a, b)))
    if k >= 3:
        out.append(swap(c, tuple(rng.sample(range(1, k + 1), 3))))
    if -(-c.n // 2) <= k <= c.n - 1:
        pairs = [cl for cl in c.classes if len(cl) == 2]
        if pairs:
            out.append(intro(c, rng.choice(rng.choice(pairs))))
    return out


def _generate_face(g: Graph, row: CutRow, orc: OracleResult, dim: int, effort: int, seed: int):
    """Greedy rank accumulation over generated colorings; returns
    ``(status, face_points, off_face_seen)``."""
    n = g.n
    rng = random.Random(seed)
    a = dense_row(row, n)
    basis = np.zeros((0, n * n + n + 1))
    face: list[np.ndarray] = []
    frontier: list[EqColoring] = []
    off = 0
    seen = set()

    def consider(c: EqColoring) -> bool:
        nonlocal basis, off
        p = to_binary(c).vector()
        key = p.tobytes()
        if key in seen:
            return True
        seen.add(key)
        s = row.rhs - int(p @ a)
        if s < 0:
            return False
        if s > 0:
            off += 1
            return True
        frontier.append(c)
        v = np.append(p, 1).astype(float)
        r = v - basis.T @ (basis @ v) if len(basis) else v
        nr = np.linalg.norm(r)
        if nr > 1e-7:
            basis = np.vstack([basis, r / nr])
            face.append(p)
        return True

    seeds = []
    try:
        seeds += spanning_family(g, orc).colorings
    except DomainError:
        pass
    seeds += list(orc.witnesses.values())
    for c in seeds:
        if not consider(c):
            return "invalid", face, off
    tries = 0
    while len(face) < dim and tries < effort:
        tries += 1
        if frontier and rng.random() < 0.7:
            base = rng.choice(frontier)
        else:
            k = rng.choice(orc.feasible_k)
            base = random_eqcol(g, k, rng) or orc.witnesses[k]
        for c in [base] + _face_moves(base, rng):
            if not consider(c):
                return "invalid", face, off
    return "done", face, off


def verify_face(g: Graph, row: CutRow, effort: int | None = None, seed: int = 0,
                orc: OracleResult | None = None, points: np.ndarray | None = None) -> FaceVerdict:
    orc = orc or oracle(g)
    dim = ecp_dimension(g, orc)
    if g.n <= ENUMERATION_LIMIT or points is not None:
        P = point_matrix(g) if points is None else points
        s = slacks(row, P, g.n)
        if s.min(initial=0) < 0:
            return FaceVerdict("invalid", 0, dim)
        on = P[s == 0]
        rank = affine_rank(on)
        off = int((s > 0).sum())
        status = "facet-verified" if rank == dim and off else "valid-face"
        return FaceVerdict(status, rank, dim, len(on), off)
    effort = effort or 50 * dim
    status, face, off = _generate_face(g, row, orc, dim, effort, seed)
    if status == "invalid":
        return FaceVerdict("invalid", 0, dim)
    rank = affine_rank(np.array(face)) if face else 0
    if rank == dim and off:
        return FaceVerdict("facet-verified", rank, dim, len(face), off)
    return FaceVerdict("rank-bound-reached", rank, dim, len(face), off)


def face_dims_equal(g: Graph, row_a: CutRow, row_b: CutRow, effort: int | None = None,
                    orc: OracleResult | None = None, points: np.ndarray | None = None) -> bool:
    va = verify_face(g, row_a, effort, orc=orc, points=points)
    vb = verify_face(g, row_b, effort, orc=orc, points=points)
    return va.rank == vb.rank


def format_verdict(graph_id: str, row: CutRow, v: FaceVerdict) -> str:
    return f"{graph_id}\t{row}\t{v.status}\t{v.rank}/{v.dim_ecp}"


# --- face membership predicates --------------------------------------------------

def on_outside_neighborhood_face(g: Graph, c: EqColoring, u: int, j: int, chi: int) -> bool:
    n, r = g.n, c.k
    if r < j:
        return True
    col = c.color_of()
    Cj = set(c.classes[j - 1])
    if col[u] == j:
        return len(Cj) == n // r
    if not Cj <= g.adj[u]:
        return False
    if n // r < n // max(j, chi):
        return col[u] >= n // (n // r + 1) + 1
    return True


def on_clique_neighborhood_face(g: Graph, c: EqColoring, u: int, j: int, k: int, Q, alpha: int) -> bool:
    n, r = g.n, c.k
    if r < j:
        return True
    col = c.color_of()
    Q = set(Q)
    Cj = set(c.classes[j - 1])
    Cn1 = set(c.classes[n - 2]) if r >= n - 1 else set()
    Cn = set(c.classes[n - 1]) if r >= n else set()
    NQ = set(g.adj[u]) | Q
    ceil_ = lambda a, b: -(-a // b)
    if r <= ceil_(n, k) - 1:
        if col[u] == j:
            return len(Cj & Q) == 1 and k == alpha + 1
        return len(Cj & NQ) == min(ceil_(n, r), alpha + 1)
    if r <= n - 2:
        if col[u] == j:
            return len(Cj & Q) == 1
        if len(Cj & NQ) != ceil_(n, r):
            return False
        if r >= ceil_(n, k - 1):
            return col[u] >= ceil_(n, ceil_(n, r))
        return True
    if col[u] in (j, n - 1, n):
        # neighbors of u in C_j count too when u itself sits in class n-1 or n
        return len(Cj & NQ) + len(Cn1 - {u}) + len(Cn - {u}) == 2
    return col[u] >= ceil_(n, 2) and len(Cj & NQ) + len(Cn1) + len(Cn) == 3


def exact_alpha_neighborhood(g: Graph, u: int) -> int:
    return stability_number(g, sorted(g.adj[u]))
