"""Presolve driver: rounds of explorers over dirty work queues.

A round runs the enabled explorers in a fixed order. Each pass receives the
union of the indices dirtied in the previous round and those dirtied so far
in the current round, so a reduction made early in a round is visible to
every later pass without waiting a full round. Round one treats everything
as dirty. The loop stops at a fixpoint (a round that applies nothing), the
round cap, the time limit, or a terminal verdict.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .explorers_fast import (
    column_singleton_equality,
    column_singleton_inequality,
    doubleton_rows,
    redundant_constraints,
    singleton_rows,
    variable_locks,
)
from .explorers_medium import (
    dual_propagation,
    parallel_columns,
    parallel_rows,
    primal_propagation,
)
from .journal import PostsolveJournal
from .problem import FEAS_TOL, LpProblem, PresolveStatus
from .reductions import PresolveContext

INF = math.inf

EXPLORER_ORDER = (
    ("singleton_rows", singleton_rows),
    ("redundant_constraints", redundant_constraints),
    ("doubleton_rows", doubleton_rows),
    ("column_singleton_equality", column_singleton_equality),
    ("column_singleton_inequality", column_singleton_inequality),
    ("variable_locks", variable_locks),
    ("parallel_rows", parallel_rows),
    ("parallel_columns", parallel_columns),
    ("primal_propagation", primal_propagation),
    ("dual_propagation", dual_propagation),
)

EXPLORER_NAMES = tuple(name for name, _ in EXPLORER_ORDER)


@dataclass
class PresolveConfig:
    """Knobs for a presolve run.

    ``disabled`` names explorers to skip (see ``EXPLORER_NAMES``).
    ``strong_dual`` permits fixing zero-cost unblocked variables at a finite
    bound, which preserves some optimal solution but not all of them.
    ``debug_validate`` recomputes all incremental state from scratch after
    every explorer pass; meant for tests, far too slow for real use.
    """

    max_rounds: int = 16
    strong_dual: bool = True
    time_limit: float | None = None
    disabled: frozenset = frozenset()
    debug_validate: bool = False

    def __post_init__(self) -> None:
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        self.disabled = frozenset(self.disabled)
        unknown = self.disabled - set(EXPLORER_NAMES)
        if unknown:
            raise ValueError(f"unknown explorer(s): {sorted(unknown)}")


@dataclass
class PresolveReport:
    """Before/after sizes and per-explorer accounting for one run.

    The serialized forms (``to_text``/``to_kv``) deliberately omit wall
    times so that identical runs produce byte-identical report files;
    timing lives in ``times``/``total_time`` for callers that want it.
    """

    status: str
    rows_before: int
    cols_before: int
    nnz_before: int
    rows_after: int
    cols_after: int
    nnz_after: int
    rounds: int
    counts: dict = field(default_factory=dict)
    times: dict = field(default_factory=dict)
    total_time: float = 0.0

    @property
    def nnz_ratio(self) -> float:
        if self.nnz_before == 0:
            return 1.0
        return self.nnz_after / self.nnz_before

    @property
    def total_reductions(self) -> int:
        return sum(self.counts.values())

    def to_text(self) -> str:
        lines = [
            f"presolve: {self.status}",
            f"rows: {self.rows_before} -> {self.rows_after}",
            f"cols: {self.cols_before} -> {self.cols_after}",
            f"nnz: {self.nnz_before} -> {self.nnz_after} (ratio {self.nnz_ratio:.4f})",
            f"rounds: {self.rounds}",
            f"reductions: {self.total_reductions}",
        ]
        for name in EXPLORER_NAMES:
            count = self.counts.get(name, 0)
            if count:
                lines.append(f"  {name}: {count}")
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        lines = [
            f"status {self.status}",
            f"rows_before {self.rows_before}",
            f"rows_after {self.rows_after}",
            f"cols_before {self.cols_before}",
            f"cols_after {self.cols_after}",
            f"nnz_before {self.nnz_before}",
            f"nnz_after {self.nnz_after}",
            f"nnz_ratio {self.nnz_ratio:.6f}",
            f"rounds {self.rounds}",
            f"reductions_total {self.total_reductions}",
        ]
        for name in EXPLORER_NAMES:
            lines.append(f"reductions_{name} {self.counts.get(name, 0)}")
        return "\n".join(lines) + "\n"


@dataclass
class PresolveResult:
    status: PresolveStatus
    problem: LpProblem
    journal: PostsolveJournal
    report: PresolveReport


def _structural_defects(problem: LpProblem) -> list[str]:
    defects = []
    arrays = (
        ("c", problem.c),
        ("col_lower", problem.col_lower),
        ("col_upper", problem.col_upper),
        ("row_lower", problem.row_lower),
        ("row_upper", problem.row_upper),
    )
    for name, arr in arrays:
        for idx in np.flatnonzero(np.isnan(arr)):
            defects.append(f"{name}[{idx}] is NaN")
    return defects


def _infeasibility_defects(problem: LpProblem) -> list[str]:
    defects = []
    for k in range(problem.num_cols):
        lb = problem.col_lower[k]
        ub = problem.col_upper[k]
        if lb == INF:
            defects.append(f"column {k} has lower bound +inf")
        if ub == -INF:
            defects.append(f"column {k} has upper bound -inf")
        if lb > ub + FEAS_TOL:
            defects.append(f"column {k} has crossed bounds: lower {lb} > upper {ub}")
    for i in range(problem.num_rows):
        bl = problem.row_lower[i]
        bu = problem.row_upper[i]
        if bl == INF:
            defects.append(f"row {i} has lower side +inf")
        if bu == -INF:
            defects.append(f"row {i} has upper side -inf")
        if bl > bu + FEAS_TOL:
            defects.append(f"row {i} has crossed sides: lower {bl} > upper {bu}")
    return defects


def validate(problem: LpProblem) -> list[str]:
    """List everything wrong with the instance; empty means clean.

    NaN defects make the instance unprocessable; crossed or wrong-way
    infinite bounds are trivial infeasibilities, which presolve reports
    as a verdict rather than an error.
    """
    return _structural_defects(problem) + _infeasibility_defects(problem)


def _compact_result(
    ctx: PresolveContext,
    original: LpProblem,
    status: PresolveStatus,
) -> tuple[LpProblem, PostsolveJournal]:
    new_matrix, row_map, col_map = ctx.matrix.compact()
    alive_rows = [i for i in range(ctx.matrix.num_rows) if row_map[i] >= 0]
    alive_cols = [k for k in range(ctx.matrix.num_cols) if col_map[k] >= 0]
    reduced = LpProblem(
        ctx.c[alive_cols],
        ctx.col_lower[alive_cols],
        ctx.col_upper[alive_cols],
        ctx.row_lower[alive_rows],
        ctx.row_upper[alive_rows],
        new_matrix,
        offset=ctx.offset,
        name=original.name,
        objective_name=original.objective_name,
        row_names=[original.row_names[i] for i in alive_rows],
        col_names=[original.col_names[k] for k in alive_cols],
    )
    ctx.journal.finalize(row_map, col_map, new_matrix.num_rows, new_matrix.num_cols)
    return reduced, ctx.journal


def presolve(problem: LpProblem, config: PresolveConfig | None = None) -> PresolveResult:
    """Reduce an LP, returning the smaller problem plus the replay journal.

    The input problem is not modified. Raises ValueError on NaN data;
    trivially contradictory bounds come back as an infeasibility verdict.
    """
    if config is None:
        config = PresolveConfig()
    structural = _structural_defects(problem)
    if structural:
        raise ValueError("invalid problem: " + "; ".join(structural))

    t0 = time.perf_counter()
    rows_before = problem.num_rows
    cols_before = problem.num_cols
    nnz_before = problem.matrix.nnz

    work = problem.copy()
    ctx = PresolveContext(
        work.matrix,
        work.c,
        work.offset,
        work.row_lower,
        work.row_upper,
        work.col_lower,
        work.col_upper,
        config,
    )
    counts = {name: 0 for name in EXPLORER_NAMES}
    times = {name: 0.0 for name in EXPLORER_NAMES}
    rounds_run = 0

    if _infeasibility_defects(problem):
        ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)

    current_rows = list(range(rows_before))
    current_cols = list(range(cols_before))
    out_of_time = False
    while ctx.verdict is None and rounds_run < config.max_rounds and not out_of_time:
        rounds_run += 1
        applied_at_start = ctx.reductions_applied
        for name, explorer in EXPLORER_ORDER:
            if name in config.disabled:
                continue
            if ctx.verdict is not None:
                break
            if (
                config.time_limit is not None
                and time.perf_counter() - t0 > config.time_limit
            ):
                out_of_time = True
                break
            rows_arg = sorted(set(current_rows) | ctx.dirty_rows)
            cols_arg = sorted(set(current_cols) | ctx.dirty_cols)
            before = ctx.reductions_applied
            t1 = time.perf_counter()
            explorer(ctx, rows_arg, cols_arg)
            times[name] += time.perf_counter() - t1
            counts[name] += ctx.reductions_applied - before
            if config.debug_validate:
                ctx.matrix.check_consistency()
                ctx.stats.verify_against_fresh()
        if ctx.reductions_applied == applied_at_start:
            break
        current_rows = sorted(ctx.dirty_rows)
        current_cols = sorted(ctx.dirty_cols)
        ctx.dirty_rows = set()
        ctx.dirty_cols = set()

    if ctx.verdict is not None:
        status = ctx.verdict
    elif (
        ctx.matrix.live_row_count() == 0
        and ctx.matrix.live_col_count() == 0
        and ctx.reductions_applied > 0
    ):
        status = PresolveStatus.SOLVED_COMPLETELY
    elif ctx.reductions_applied > 0:
        status = PresolveStatus.REDUCED
    else:
        status = PresolveStatus.UNCHANGED

    reduced, journal = _compact_result(ctx, problem, status)
    report = PresolveReport(
        status=status.value,
        rows_before=rows_before,
        cols_before=cols_before,
        nnz_before=nnz_before,
        rows_after=reduced.num_rows,
        cols_after=reduced.num_cols,
        nnz_after=reduced.matrix.nnz,
        rounds=rounds_run,
        counts=counts,
        times=times,
        total_time=time.perf_counter() - t0,
    )
    return PresolveResult(status=status, problem=reduced, journal=journal, report=report)
