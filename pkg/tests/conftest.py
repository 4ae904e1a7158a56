import random

import pytest

from eqcol.graph import Graph, complete_bipartite, cycle_graph
from eqcol.io import builtin


def rand_graph(n, p, seed):
    """Independent test generator (stdlib Mersenne Twister, not the package PRNG)."""
    r = random.Random(seed)
    return Graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if r.random() < p])


@pytest.fixture
def k33():
    return complete_bipartite(3, 3)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def fig1():
    return builtin("fig1")


@pytest.fixture
def fig2():
    return builtin("fig2")


def sorted_colorings(g, max_k=None):
    """Every equitable coloring with classes ordered by their smallest vertex."""
    from eqcol.coloring import EqColoring, iter_partitions
    from eqcol.graph import vertices_of

    top = g.n if max_k is None else max_k
    for k in range(1, top + 1):
        for masks in iter_partitions(g, k):
            classes = sorted((vertices_of(m) for m in masks), key=min)
            yield EqColoring(g.n, tuple(classes))


def model_vector(c, idx):
    import numpy as np

    vec = np.zeros(idx.num_cols)
    for j, cls in enumerate(c.classes, 1):
        for v in cls:
            vec[idx.x(v, j)] = 1
        vec[idx.w(j)] = 1
    return vec


ACCEPTANCE_LINES: list[str] = []


def record(number: int, ok: bool, detail: str) -> bool:
    """Keep one PASS/FAIL line per acceptance criterion for the terminal summary."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
