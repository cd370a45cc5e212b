"""Python bindings for the indefinite Sturm-Liouville eigenvalue solver."""

from ._indefsl import (
    Error,
    HypothesisError,
    InputError,
    NumericalError,
    PiecewiseFn,
    Problem,
    bounds,
    find_nonreal,
    load_problem,
    negative_eigenvalue_count,
    newton_refine,
    oracle_eigenvalues,
    parse_problem,
    problem,
    richardson,
    shoot,
    winding_count,
)

__all__ = [
    "Error",
    "HypothesisError",
    "InputError",
    "NumericalError",
    "PiecewiseFn",
    "Problem",
    "bounds",
    "find_nonreal",
    "load_problem",
    "negative_eigenvalue_count",
    "newton_refine",
    "oracle_eigenvalues",
    "parse_problem",
    "problem",
    "richardson",
    "shoot",
    "winding_count",
]
