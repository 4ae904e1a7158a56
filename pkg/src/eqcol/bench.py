"""Benchmark batteries: root cut-loop metrics and full solves, written as CSV/JSON."""
from __future__ import annotations

import csv
import json
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from .io import load_instance
from .solver import Limits, cut_and_branch, cutting_plane
from .bounds import initial_bounds, label_vertices
from .graph import maximal_clique
from .model import build_formulation


@dataclass
class RunConfig:
    input: str                       # builtin:NAME | random:N:DENSITY:SEED | DIMACS path
    strategy: str = "S4"
    rounds: int = 30
    time_limit: float | None = None
    node_cap: int | None = None
    engine: str = "highs"
    mode: str = "cutloop"            # cutloop | solve


@dataclass
class BenchRow:
    instance: str
    n: int
    density: float
    strategy: str
    impr: int | None = None
    time: float | None = None
    cuts: int | None = None
    lb0: float | None = None
    lb_final: float | None = None
    solved: bool | None = None
    chi_eq: int | None = None
    nodes: int | None = None
    total_time: float | None = None
    monotone: bool | None = None
    error: str = ""


HEADER = [f.name for f in fields(BenchRow)]


def battery(ns, densities, seeds, strategies, **kw) -> list[RunConfig]:
    return [RunConfig(f"random:{n}:{d}:{s}", strategy=st, **kw)
            for n in ns for d in densities for s in seeds for st in strategies]


def run_one(cfg: RunConfig) -> BenchRow:
    try:
        iid, g = load_instance(cfg.input)
    except Exception as exc:   # recorded per row; the batch continues
        return BenchRow(cfg.input, 0, 0.0, cfg.strategy, error=f"{type(exc).__name__}: {exc}")
    row = BenchRow(iid, g.n, round(100 * g.density(), 2), cfg.strategy)
    try:
        if cfg.mode == "solve":
            rep = cut_and_branch(g, cfg.strategy, Limits(cfg.time_limit, cfg.node_cap),
                                 rounds=cfg.rounds, engine=cfg.engine)
            row.solved = rep.optimal
            row.chi_eq = rep.chi_eq
            row.nodes = rep.nodes
            row.total_time = rep.seconds
            root = rep.root
        else:
            h = g.relabel(list(label_vertices(g, maximal_clique(g))))
            b = initial_bounds(h)
            _, root = cutting_plane(h, build_formulation(h, b.lb, b.ub), cfg.strategy, cfg.rounds,
                                    bounds=b, engine=cfg.engine)
        if root is not None:
            traj = root.lb_trajectory
            row.impr = root.impr
            row.time = root.time_to_best
            row.cuts = root.cuts_to_best
            row.lb0, row.lb_final = traj[0], traj[-1]
            row.monotone = all(b >= a - 1e-7 for a, b in zip(traj, traj[1:]))
    except Exception as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        traceback.print_exc()
    return row


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _nominal_density(r: BenchRow) -> float:
    parts = r.instance.split("_")
    if r.instance.startswith("r") and len(parts) == 3:
        try:
            return float(parts[1])
        except ValueError:
            pass
    return r.density


def density_averages(rows: list[BenchRow]) -> list[dict]:
    """Mean metrics per (nominal density, strategy), skipping failed rows."""
    groups: dict[tuple, list[BenchRow]] = {}
    for r in rows:
        if not r.error:
            groups.setdefault((_nominal_density(r), r.strategy), []).append(r)
    out = []
    for (d, st), rs in sorted(groups.items()):
        def mean(attr):
            vals = [getattr(r, attr) for r in rs if getattr(r, attr) is not None]
            return sum(vals) / len(vals) if vals else None
        out.append({"density": d, "strategy": st, "count": len(rs), "impr": mean("impr"),
                    "time": mean("time"), "cuts": mean("cuts"), "nodes": mean("nodes"),
                    "total_time": mean("total_time")})
    return out


def run_benchmark(configs, csv_path: str | None = None, json_path: str | None = None,
                  workers: int = 1) -> tuple[list[BenchRow], list[dict]]:
    configs = list(configs)
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(run_one, configs))      # map keeps input order
    else:
        rows = [run_one(c) for c in configs]
    avgs = density_averages(rows)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(HEADER)
            for r in rows:
                w.writerow([_fmt(getattr(r, h)) for h in HEADER])
            for a in avgs:
                w.writerow([f"avg-d{a['density']:g}", "", _fmt(a["density"]), a["strategy"], _fmt(a["impr"]),
                            _fmt(a["time"]), _fmt(a["cuts"]), "", "", "", "", _fmt(a["nodes"]),
                            _fmt(a["total_time"]), "", ""])
    if json_path:
        with open(json_path, "w") as fh:
            json.dump({"rows": [asdict(r) for r in rows], "averages": avgs}, fh, indent=2)
    return rows, avgs
