"""DIMACS reading/writing, the seeded random-graph generator and builtin fixtures."""
from __future__ import annotations

from .errors import DimacsParseError
from .graph import Graph, complete_bipartite, cycle_graph

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64: ``state += 0x9E3779B97F4A7C15`` then two xor-shift-multiply
    rounds and a final xor-shift.  ``random()`` keeps the top 53 bits."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def random_graph(n: int, density: float, seed: int) -> Graph:
    """Each pair ``u < v`` (lexicographic order) is an edge iff the next draw is
    below ``density / 100``."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= density <= 100:
        raise ValueError("density must lie in [0, 100]")
    rng = SplitMix64(seed)
    p = density / 100.0
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    return Graph(n, edges)


def parse_dimacs(text: str) -> Graph:
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsParseError(f"malformed problem line {line!r}", lineno)
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsParseError(f"malformed problem line {line!r}", lineno) from None
            if n < 1:
                raise DimacsParseError("vertex count must be positive", lineno)
        elif parts[0] == "e":
            if n is None:
                raise DimacsParseError("edge before problem line", lineno)
            if len(parts) != 3:
                raise DimacsParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsParseError(f"malformed edge line {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsParseError(f"vertex out of range 1..{n} in {line!r}", lineno)
            if u == v:
                raise DimacsParseError(f"self-loop in {line!r}", lineno)
            edges.add((min(u, v), max(u, v)))
        else:
            raise DimacsParseError(f"unknown line type {line!r}", lineno)
    if n is None:
        raise DimacsParseError("missing problem line")
    return Graph(n, edges)


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out += [f"c {line}" for line in comment.splitlines()]
    out.append(f"p edge {g.n} {len(g.edges)}")
    out += [f"e {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(out) + "\n"


def read_dimacs(path: str) -> Graph:
    with open(path) as fh:
        return parse_dimacs(fh.read())


FIG1_EDGES = ([(1, v) for v in range(2, 8)] + [(2, v) for v in range(3, 8)]
              + [(3, 4), (4, 5), (5, 6), (6, 7), (3, 7), (3, 8), (8, 9), (9, 10), (10, 11)])
FIG2_EDGES = [(1, v) for v in range(2, 7)] + [(2, 7), (7, 8), (8, 9), (9, 10), (10, 11)]


def builtin(name: str) -> Graph:
    key = name.lower().replace("_", "").replace("-", "")
    if key == "k33":
        return complete_bipartite(3, 3)
    if key == "c5":
        return cycle_graph(5)
    if key == "fig1":
        return Graph(11, FIG1_EDGES)
    if key == "fig2":
        return Graph(11, FIG2_EDGES)
    raise KeyError(f"unknown builtin graph {name!r}; choose k33, c5, fig1 or fig2")


BUILTINS = ("k33", "c5", "fig1", "fig2")


def load_instance(spec: str) -> tuple[str, Graph]:
    """``builtin:NAME``, ``random:N:DENSITY:SEED``, a bare builtin name, or a DIMACS path."""
    if spec.startswith("random:"):
        try:
            _, n, d, s = spec.split(":")
            n, d, s = int(n), float(d), int(s)
        except ValueError:
            raise ValueError(f"random instance must be random:N:DENSITY:SEED, got {spec!r}") from None
        return f"r{n}_{d:g}_{s}", random_graph(n, d, s)
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        return name, builtin(name)
    if spec.lower() in BUILTINS:
        return spec.lower(), builtin(spec)
    return spec, read_dimacs(spec)
