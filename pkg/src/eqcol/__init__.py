"""Equitable graph coloring: exact oracles, an ILP with cutting planes, and
polytope checks."""
from .coloring import EqColoring, exists_eqcol, is_equitable, oracle
from .graph import Graph
from .io import builtin, parse_dimacs, random_graph, write_dimacs
from .solver import Limits, cut_and_branch, cutting_plane

__all__ = ["EqColoring", "Graph", "Limits", "builtin", "cut_and_branch", "cutting_plane",
           "exists_eqcol", "is_equitable", "oracle", "parse_dimacs", "random_graph", "write_dimacs"]
