"""LP relaxation engines.

Three interchangeable engines share one small interface (``load``,
``add_rows``, ``set_col_bounds``, ``solve``):

* ``embedded`` -- dense bounded-variable primal simplex in numpy;
* ``highs`` -- the HiGHS dual simplex through ``highspy`` (warm-started);
* ``external-command`` -- writes the model as LP text, runs a user command and
  reads back a solution file.

Solution file format read by the external engine::

    status optimal|infeasible|iteration-limit
    objective <float>
    <column name> <value>      (one line per column, names as in the LP text)
"""
from __future__ import annotations

import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, replace

import numpy as np

from .model import ModelSpec, Row, VarIndex

FEAS_TOL = 1e-6
OPTIMAL, INFEASIBLE, ITERATION_LIMIT = "optimal", "infeasible", "iteration-limit"


@dataclass(frozen=True)
class FracPoint:
    x: np.ndarray       # n x ub
    w: np.ndarray       # ub
    objective: float
    vector: np.ndarray  # raw column values

    @classmethod
    def from_vector(cls, vec: np.ndarray, idx: VarIndex, objective: float) -> "FracPoint":
        vec = np.clip(np.asarray(vec, dtype=float), 0.0, 1.0)
        return cls(vec[: idx.num_x].reshape(idx.n, idx.ub), vec[idx.num_x:], float(objective), vec)

    def is_integral(self, tol: float = FEAS_TOL) -> bool:
        v = self.vector
        return bool(np.all(np.minimum(v, 1.0 - v) <= tol))


@dataclass(frozen=True)
class LPOutcome:
    status: str
    point: FracPoint | None
    bound: float            # optimal objective; -inf when no bound is known
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def objective(self) -> float:
        return self.point.objective if self.point is not None else float("nan")


# --- embedded dense simplex ------------------------------------------------

class DenseSimplex:
    """Bounded-variable primal simplex on a dense tableau.

    ``min c x  s.t.  A x (sense) b,  lo <= x <= hi`` with finite ``lo``.
    Dantzig pricing; after ``3 * m`` consecutive degenerate pivots the phase
    continues under Bland's rule.  The tableau is refactored from the original
    columns every ``refactor_every`` pivots and at the end of each phase.
    """

    def __init__(self, c, A, senses, b, lo, hi, max_iter=None, refactor_every=64):
        self.c = np.asarray(c, float)
        A = np.asarray(A, float).reshape(len(senses), len(self.c))
        self.m, self.ns = A.shape
        b = np.asarray(b, float)
        lo = np.asarray(lo, float)
        hi = np.asarray(hi, float)
        if np.any(~np.isfinite(lo)):
            raise ValueError("embedded simplex needs finite lower bounds")
        slack_rows = [i for i, s in enumerate(senses) if s != "=="]
        S = np.zeros((self.m, len(slack_rows)))
        for t, i in enumerate(slack_rows):
            S[i, t] = 1.0 if senses[i] == "<=" else -1.0
        self.nsl = len(slack_rows)
        self.A = np.hstack([A, S, np.eye(self.m)])
        self.b = b
        N = self.A.shape[1]
        self.lo = np.concatenate([lo, np.zeros(self.nsl), np.zeros(self.m)])
        self.hi = np.concatenate([hi, np.full(self.nsl, np.inf), np.full(self.m, np.inf)])
        self.art0 = self.ns + self.nsl
        self.max_iter = max_iter or 50 * (self.m + N) + 1000
        self.refactor_every = refactor_every
        self.iterations = 0

    def _setup(self):
        N = self.A.shape[1]
        self.xval = self.lo.copy()
        self.at_upper = np.zeros(N, bool)
        nb = np.arange(self.art0)
        r = self.b - self.A[:, nb] @ self.xval[nb]
        sigma = np.where(r >= 0, 1.0, -1.0)
        self.A[:, self.art0:] = np.diag(sigma)
        self.basis = np.arange(self.art0, self.art0 + self.m)
        self.T = sigma[:, None] * self.A
        self.beta = np.abs(r)
        self.is_basic = np.zeros(N, bool)
        self.is_basic[self.basis] = True

    def _refactor(self):
        B = self.A[:, self.basis]
        try:
            self.T = np.linalg.solve(B, self.A)
            nonbasic = ~self.is_basic
            rhs = self.b - self.A[:, nonbasic] @ self.xval[nonbasic]
            self.beta = np.linalg.solve(B, rhs)
        except np.linalg.LinAlgError:
            pass

    def _phase(self, cost, tol=1e-9, piv_tol=1e-9):
        bland = False
        degenerate = 0
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iter:
                return ITERATION_LIMIT
            d = cost - cost[self.basis] @ self.T
            movable = (~self.is_basic) & (self.hi - self.lo > 1e-12)
            elig = movable & (((~self.at_upper) & (d < -tol)) | (self.at_upper & (d > tol)))
            cand = np.flatnonzero(elig)
            if cand.size == 0:
                return OPTIMAL
            j = int(cand[0]) if bland else int(cand[np.argmax(np.abs(d[cand]))])
            dirn = -1.0 if self.at_upper[j] else 1.0
            col = self.T[:, j] * dirn
            lB, uB = self.lo[self.basis], self.hi[self.basis]
            theta = np.full(self.m, np.inf)
            pos = col > piv_tol
            neg = col < -piv_tol
            theta[pos] = (self.beta[pos] - lB[pos]) / col[pos]
            fin = neg & np.isfinite(uB)
            theta[fin] = (uB[fin] - self.beta[fin]) / (-col[fin])
            theta = np.maximum(theta, 0.0)
            flip = self.hi[j] - self.lo[j]
            tmin = theta.min() if self.m else np.inf
            self.iterations += 1
            if flip <= tmin:
                if not np.isfinite(flip):
                    return "unbounded"
                self.beta -= flip * col
                self.at_upper[j] = not self.at_upper[j]
                self.xval[j] = self.hi[j] if self.at_upper[j] else self.lo[j]
                degenerate = 0
                continue
            ties = np.flatnonzero(theta <= tmin + 1e-12)
            if bland:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                r = int(ties[np.argmax(np.abs(col[ties]))])
            t = theta[r]
            self.beta -= t * col
            leaving = self.basis[r]
            entering_val = self.xval[j] + dirn * t
            self.at_upper[leaving] = col[r] < 0
            self.xval[leaving] = self.hi[leaving] if col[r] < 0 else self.lo[leaving]
            self.is_basic[leaving] = False
            piv = self.T[r, j]
            self.T[r] /= piv
            f = self.T[:, j].copy()
            f[r] = 0.0
            self.T -= np.outer(f, self.T[r])
            self.basis[r] = j
            self.is_basic[j] = True
            self.at_upper[j] = False
            self.beta[r] = entering_val
            since_refactor += 1
            if since_refactor >= self.refactor_every:
                self._refactor()
                since_refactor = 0
            if t <= 1e-12:
                degenerate += 1
                if degenerate > 3 * self.m:
                    bland = True
            else:
                degenerate = 0

    def values(self) -> np.ndarray:
        x = self.xval.copy()
        x[self.basis] = self.beta
        return x

    def solve(self):
        """Return ``(status, x, objective)``."""
        self._setup()
        N = self.A.shape[1]
        cost1 = np.zeros(N)
        cost1[self.art0:] = 1.0
        st = self._phase(cost1)
        self._refactor()
        if st != OPTIMAL:
            return st, None, None
        infeas = self.values()[self.art0:].sum()
        if infeas > FEAS_TOL * max(1.0, np.abs(self.b).max(initial=0.0)):
            return INFEASIBLE, None, None
        self.hi[self.art0:] = 0.0
        cost2 = np.zeros(N)
        cost2[: self.ns] = self.c
        st = self._phase(cost2)
        self._refactor()
        if st != OPTIMAL:
            return st, None, None
        x = self.values()[: self.ns]
        return OPTIMAL, x, float(self.c @ x)


def _dense(model: ModelSpec):
    ncol = model.index.num_cols
    A = np.zeros((len(model.rows), ncol))
    for i, r in enumerate(model.rows):
        A[i, list(r.cols)] += r.vals
    return A, [r.sense for r in model.rows], np.array([r.rhs for r in model.rows])


# --- engines -------------------------------------------------------------------

class LPEngine:
    name = "abstract"

    def __init__(self):
        self.model: ModelSpec | None = None
        self._lo = self._hi = None

    def load(self, model: ModelSpec) -> None:
        self.model = model
        self._lo = model.col_lower.copy()
        self._hi = model.col_upper.copy()

    def add_rows(self, rows) -> None:
        self.model = self.model.with_rows(rows)

    def set_col_bounds(self, cols, lo, hi) -> None:
        cols = np.asarray(cols, dtype=int)
        self._lo[cols] = lo
        self._hi[cols] = hi

    def current_model(self) -> ModelSpec:
        return replace(self.model, col_lower=self._lo.copy(), col_upper=self._hi.copy())

    def solve(self) -> LPOutcome:
        raise NotImplementedError

    def _outcome(self, status, vec, obj, iters=0) -> LPOutcome:
        if status != OPTIMAL:
            return LPOutcome(status, None, float("-inf"), iters)
        pt = FracPoint.from_vector(vec, self.model.index, obj)
        return LPOutcome(OPTIMAL, pt, float(obj), iters)


class EmbeddedEngine(LPEngine):
    """Dense simplex; every solve starts from the slack/artificial basis."""

    name = "embedded"

    def solve(self) -> LPOutcome:
        m = self.model
        if m.index.num_cols < 1:
            raise ValueError("model has no variables")
        A, senses, b = _dense(m)
        if np.any(self._lo > self._hi + 1e-12):
            return LPOutcome(INFEASIBLE, None, float("-inf"))
        sx = DenseSimplex(m.objective, A, senses, b, self._lo, self._hi)
        st, x, obj = sx.solve()
        if st == "unbounded":
            st = ITERATION_LIMIT
        return self._outcome(st, x, obj, sx.iterations)


class HighsEngine(LPEngine):
    """HiGHS through highspy; rows and bound changes are applied in place so
    re-solves start from the previous basis."""

    name = "highs"

    def load(self, model: ModelSpec) -> None:
        import highspy

        super().load(model)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        self._inf = highspy.kHighsInf
        ncol = model.index.num_cols
        h.addVars(ncol, self._lo, self._hi)
        h.changeColsCost(ncol, np.arange(ncol, dtype=np.int32), model.objective.astype(float))
        self._h = h
        self._push_rows(model.rows)

    def _push_rows(self, rows) -> None:
        if not rows:
            return
        lower, upper, starts, index, value = [], [], [], [], []
        for r in rows:
            lower.append(r.rhs if r.sense in (">=", "==") else -self._inf)
            upper.append(r.rhs if r.sense in ("<=", "==") else self._inf)
            starts.append(len(index))
            index.extend(r.cols)
            value.extend(r.vals)
        self._h.addRows(len(rows), np.array(lower, float), np.array(upper, float), len(index),
                        np.array(starts, dtype=np.int32), np.array(index, dtype=np.int32),
                        np.array(value, float))

    def add_rows(self, rows) -> None:
        rows = tuple(rows)
        super().add_rows(rows)
        self._push_rows(rows)

    def set_col_bounds(self, cols, lo, hi) -> None:
        super().set_col_bounds(cols, lo, hi)
        cols = np.asarray(cols, dtype=np.int32)
        if cols.size:
            self._h.changeColsBounds(cols.size, cols, self._lo[cols], self._hi[cols])

    def solve(self) -> LPOutcome:
        import highspy

        h = self._h
        h.run()
        st = h.getModelStatus()
        iters = h.getInfo().simplex_iteration_count
        if st == highspy.HighsModelStatus.kOptimal:
            sol = np.array(h.getSolution().col_value)
            return self._outcome(OPTIMAL, sol, h.getInfo().objective_function_value, iters)
        if st == highspy.HighsModelStatus.kInfeasible:
            return LPOutcome(INFEASIBLE, None, float("-inf"), iters)
        return LPOutcome(ITERATION_LIMIT, None, float("-inf"), iters)


class ExternalCommandEngine(LPEngine):
    """Runs ``command`` (a format string with ``{lp}`` and ``{sol}``) per solve."""

    name = "external-command"

    def __init__(self, command: str, workdir: str | None = None, timeout: float | None = None):
        super().__init__()
        self.command = command
        self.workdir = workdir
        self.timeout = timeout

    def solve(self) -> LPOutcome:
        model = self.current_model()
        with tempfile.TemporaryDirectory(dir=self.workdir) as tmp:
            lp_path = os.path.join(tmp, "model.lp")
            sol_path = os.path.join(tmp, "model.sol")
            with open(lp_path, "w") as fh:
                fh.write(model.to_lp_text())
            cmd = [part.format(lp=lp_path, sol=sol_path) for part in shlex.split(self.command)]
            subprocess.run(cmd, check=True, timeout=self.timeout, capture_output=True)
            status, obj, values = read_solution(sol_path, model.index)
        if status != OPTIMAL:
            return LPOutcome(status, None, float("-inf"))
        return self._outcome(OPTIMAL, values, obj)


def make_engine(name: str = "highs", **opts) -> LPEngine:
    if name == "embedded":
        return EmbeddedEngine()
    if name == "highs":
        return HighsEngine()
    if name == "external-command":
        return ExternalCommandEngine(**opts)
    raise ValueError(f"unknown LP engine {name!r}")


def solve_lp(model: ModelSpec, engine: str | LPEngine = "highs") -> LPOutcome:
    eng = make_engine(engine) if isinstance(engine, str) else engine
    eng.load(model)
    return eng.solve()


def resolve_with_rows(engine: LPEngine, rows) -> LPOutcome:
    engine.add_rows(tuple(rows))
    return engine.solve()


# --- text formats --------------------------------------------------------------

def read_solution(path: str, idx: VarIndex):
    status, obj = ITERATION_LIMIT, float("nan")
    vec = np.zeros(idx.num_cols)
    names = {idx.name(c): c for c in range(idx.num_cols)}
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if len(parts) != 2:
                continue
            key, val = parts
            if key == "status":
                status = val
            elif key == "objective":
                obj = float(val)
            elif key in names:
                vec[names[key]] = float(val)
    return status, obj, vec


def write_solution(path: str, status: str, objective: float | None, names, values) -> None:
    with open(path, "w") as fh:
        fh.write(f"status {status}\n")
        if objective is not None:
            fh.write(f"objective {objective!r}\n")
            for nm, v in zip(names, values):
                fh.write(f"{nm} {float(v)!r}\n")


_LP_TERM = re.compile(r"([+-]?)\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z]\w*)")


def _parse_expr(expr: str) -> dict[str, float]:
    out = {}
    for sign, coef, name in _LP_TERM.findall(expr):
        c = float(coef) if coef else 1.0
        out[name] = out.get(name, 0.0) + (-c if sign == "-" else c)
    return out


def read_lp_text(text: str):
    """Parse the LP text written by :meth:`ModelSpec.to_lp_text`.

    Returns ``(names, c, A, senses, b, lo, hi)`` as dense arrays.
    """
    section = None
    obj_terms: dict[str, float] = {}
    rows = []
    bounds = {}
    names: list[str] = []
    seen = set()

    def note(nm):
        if nm not in seen:
            seen.add(nm)
            names.append(nm)

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "end"):
            section = low
            continue
        if section == "minimize":
            obj_terms = _parse_expr(line.split(":", 1)[1])
            for nm in obj_terms:
                note(nm)
        elif section == "subject to":
            body = line.split(":", 1)[1]
            m = re.match(r"(.*?)(<=|>=|=)\s*(\S+)$", body)
            lhs, sense, rhs = m.groups()
            terms = _parse_expr(lhs)
            for nm in terms:
                note(nm)
            rows.append((terms, {"=": "=="}.get(sense, sense), float(rhs)))
        elif section == "bounds":
            m = re.match(r"(\S+)\s*<=\s*(\S+)\s*<=\s*(\S+)$", line)
            if m:
                lo, nm, hi = m.groups()
                bounds[nm] = (float(lo), float(hi))
            else:
                nm, val = [s.strip() for s in line.split("=")]
                bounds[nm] = (float(val), float(val))
            note(nm)
    pos = {nm: i for i, nm in enumerate(names)}
    c = np.zeros(len(names))
    for nm, v in obj_terms.items():
        c[pos[nm]] = v
    A = np.zeros((len(rows), len(names)))
    for i, (terms, _, _) in enumerate(rows):
        for nm, v in terms.items():
            A[i, pos[nm]] += v
    lo = np.array([bounds.get(nm, (0.0, np.inf))[0] for nm in names])
    hi = np.array([bounds.get(nm, (0.0, np.inf))[1] for nm in names])
    return names, c, A, [r[1] for r in rows], np.array([r[2] for r in rows]), lo, hi
