"""Fixpoint solvers with combined widening and narrowing."""

from pathlib import Path

from ._intertwine import (
    IntertwineError,
    ParseError,
    Wto,
    analyze,
    build_wto,
    check_wto,
    compare,
    solve,
    solver_names,
)

__all__ = [
    "IntertwineError",
    "ParseError",
    "Wto",
    "analyze",
    "analyze_file",
    "build_wto",
    "check_wto",
    "compare",
    "solve",
    "solve_file",
    "solver_names",
]


def solve_file(path, **kwargs):
    return solve(Path(path).read_text(), **kwargs)


def analyze_file(path, **kwargs):
    return analyze(Path(path).read_text(), **kwargs)
