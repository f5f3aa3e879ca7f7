"""Shared builders for the test suite."""

import numpy as np
import pytest

from pslp.driver import PresolveConfig
from pslp.problem import LpProblem
from pslp.reductions import PresolveContext

INF = float("inf")


def make_problem(entries, c, cl, cu, rl, ru, num_rows=None, num_cols=None, **kwargs):
    """Build an LpProblem from triplets with dims inferred from the vectors."""
    if num_rows is None:
        num_rows = len(rl)
    if num_cols is None:
        num_cols = len(c)
    return LpProblem.from_entries(
        num_rows,
        num_cols,
        entries,
        c=c,
        col_lower=cl,
        col_upper=cu,
        row_lower=rl,
        row_upper=ru,
        **kwargs,
    )


def make_ctx(problem, config=None):
    """Presolve working state over a private copy of the problem."""
    work = problem.copy()
    return PresolveContext(
        work.matrix,
        work.c,
        work.offset,
        work.row_lower,
        work.row_upper,
        work.col_lower,
        work.col_upper,
        config or PresolveConfig(),
    )


def all_rows(ctx):
    return [i for i in range(ctx.matrix.num_rows) if ctx.matrix.row_is_alive(i)]


def all_cols(ctx):
    return [k for k in range(ctx.matrix.num_cols) if ctx.matrix.col_is_alive(k)]


def dense_of(matrix):
    return matrix.to_dense()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
