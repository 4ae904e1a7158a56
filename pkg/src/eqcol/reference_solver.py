"""Reference external LP command: ``python -m eqcol.reference_solver LP SOL``.

Reads LP text written by the model exporter, solves it with the embedded
simplex and writes the solution file format understood by the
``external-command`` engine.
"""
import sys

from .lp import DenseSimplex, read_lp_text, write_solution


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    lp_path, sol_path = argv
    with open(lp_path) as fh:
        names, c, A, senses, b, lo, hi = read_lp_text(fh.read())
    status, x, obj = DenseSimplex(c, A, senses, b, lo, hi).solve()
    if status == "unbounded":
        status = "iteration-limit"
    write_solution(sol_path, status, obj, names, x if x is not None else [])


if __name__ == "__main__":
    main()
