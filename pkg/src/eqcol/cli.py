"""Command line entry point: ``eqcol {solve,cutloop,verify,bench,gen}``."""
from __future__ import annotations

import argparse
import sys

from .bench import RunConfig, battery, run_benchmark
from .errors import DimacsParseError, InfeasibleConfigError
from .io import load_instance, random_graph, write_dimacs
from .lp import make_engine

EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_TIMELIMIT = 0, 2, 3, 4


def _engine(args):
    if args.engine == "external-command":
        if not args.lp_command:
            raise SystemExit("--lp-command is required with --engine external-command")
        return make_engine("external-command", command=args.lp_command)
    return args.engine


def _solver_flags(p):
    p.add_argument("input", help="DIMACS path, builtin:NAME or random:N:DENSITY:SEED")
    p.add_argument("--strategy", default="S4", help="S1..S7 (default S4)")
    p.add_argument("--rounds", type=int, default=30)
    p.add_argument("--engine", default="highs", choices=["highs", "embedded", "external-command"])
    p.add_argument("--lp-command", help="command template with {lp} and {sol} placeholders")


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out += list(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eqcol", description="Equitable coloring by cut-and-branch")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("solve", help="compute the equitable chromatic number")
    _solver_flags(p)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--node-cap", type=int)
    p.add_argument("--force-ilp", action="store_true", help="skip polynomial presolve")

    p = sub.add_parser("cutloop", help="run the root cutting-plane loop and report bounds")
    _solver_flags(p)
    p.add_argument("--log", action="store_true", help="print one line per cut")

    p = sub.add_parser("verify", help="polytope checks on a small graph")
    p.add_argument("input")
    p.add_argument("--rows", help="file with one serialized cut row per line")
    p.add_argument("--effort", type=int)

    p = sub.add_parser("bench", help="run a random battery")
    p.add_argument("--n", default="30", help="vertex counts, e.g. 20,30")
    p.add_argument("--densities", default="30,50,70,90")
    p.add_argument("--seeds", default="1-10")
    p.add_argument("--strategies", default="S1,S4")
    p.add_argument("--mode", default="cutloop", choices=["cutloop", "solve"])
    p.add_argument("--rounds", type=int, default=30)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--node-cap", type=int)
    p.add_argument("--engine", default="highs", choices=["highs", "embedded"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv")
    p.add_argument("--json")

    p = sub.add_parser("gen", help="write a random graph in DIMACS format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("-o", "--output")
    return ap


def _cmd_solve(args) -> int:
    from .solver import Limits, cut_and_branch

    name, g = load_instance(args.input)
    rep = cut_and_branch(g, args.strategy, Limits(args.time_limit, args.node_cap), rounds=args.rounds,
                         engine=_engine(args), force_ilp=args.force_ilp)
    print(f"instance {name} n={g.n} m={len(g.edges)}")
    print(f"status {rep.status}")
    if rep.lb is not None:
        print(f"bounds {rep.lb} {rep.ub}")
    if rep.root is not None:
        print(f"root impr={rep.root.impr} lb0={rep.root.lb_trajectory[0]:.6f} "
              f"lb={rep.root.lb_trajectory[-1]:.6f}")
    print(f"nodes {rep.nodes} seconds {rep.seconds:.3f}")
    if rep.optimal:
        print(f"chi_eq {rep.chi_eq}")
    if rep.coloring is not None:
        col = rep.coloring.color_of()
        print("coloring " + " ".join(str(col[v]) for v in g.vertices))
    return EXIT_OK if rep.optimal else EXIT_TIMELIMIT


def _cmd_cutloop(args) -> int:
    from .bounds import initial_bounds, label_vertices
    from .graph import maximal_clique
    from .model import build_formulation
    from .solver import cutting_plane

    name, g = load_instance(args.input)
    h = g.relabel(list(label_vertices(g, maximal_clique(g))))
    b = initial_bounds(h)
    _, rep = cutting_plane(h, build_formulation(h, b.lb, b.ub), args.strategy, args.rounds,
                           bounds=b, engine=_engine(args))
    if args.log:
        for line in rep.log_lines:
            print(line)
    print(f"instance {name} n={g.n} bounds {b.lb} {b.ub}")
    print("lb " + " ".join(f"{v:.6f}" for v in rep.lb_trajectory))
    print(f"impr {rep.impr} time {rep.time_to_best:.3f} cuts {rep.cuts_to_best} rounds {rep.rounds_run}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .coloring import oracle
    from .cuts import parse_row
    from .polytope import (ecp_dimension, format_verdict, spanning_family, standing_assumptions,
                           verify_dimension, verify_face)

    name, g = load_instance(args.input)
    orc = oracle(g)
    print(f"instance {name} chi_eq {orc.chi_eq} skip {sorted(orc.skip_set)} dim {ecp_dimension(g, orc)}")
    if standing_assumptions(g, orc):
        fam = spanning_family(g, orc)
        print(f"spanning family size {len(fam)} rank {fam.rank}")
        print(f"dimension {'ok' if verify_dimension(g) else 'FAILED'}")
    else:
        print("standing assumptions not met; dimension checks skipped")
    if args.rows:
        with open(args.rows) as fh:
            for line in fh:
                if line.strip():
                    row = parse_row(line.strip())
                    print(format_verdict(name, row, verify_face(g, row, args.effort, orc=orc)))
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfgs = battery(_ints(args.n), [float(d) for d in args.densities.split(",")], _ints(args.seeds),
                   args.strategies.split(","), rounds=args.rounds, time_limit=args.time_limit,
                   node_cap=args.node_cap, engine=args.engine, mode=args.mode)
    rows, avgs = run_benchmark(cfgs, args.csv, args.json, args.workers)
    for a in avgs:
        print(f"density {a['density']:g} {a['strategy']} impr {a['impr']:.3f} count {a['count']}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    g = random_graph(args.n, args.density, args.seed)
    text = write_dimacs(g, f"random n={args.n} density={args.density:g} seed={args.seed} splitmix64")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": _cmd_solve, "cutloop": _cmd_cutloop, "verify": _cmd_verify,
               "bench": _cmd_bench, "gen": _cmd_gen}[args.verb]
    try:
        return handler(args)
    except (DimacsParseError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleConfigError as exc:
        print(f"infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
