"""Atomic problem reductions.

Each operation mutates the working problem (matrix, costs, bounds, sides,
offset), appends one journal record carrying everything postsolve will need,
keeps the statistics tracker in sync, and marks the touched rows/columns
dirty for the next explorer passes.

Side shifts performed here (fixing a variable, adding a scaled equality row)
never change whether a side is finite, so variable locks are unaffected by
them and no lock bookkeeping is needed beyond the entry-change hooks.
"""

from __future__ import annotations

import math

import numpy as np

from .journal import (
    AddScaledEqualityRow,
    AggregateParallelColumns,
    ChangeBounds,
    ChangeRowSides,
    FixVariable,
    FixingCause,
    PostsolveJournal,
    RemovalCause,
    RemoveConstraint,
    RowSnapshot,
    SubstituteSingleton,
)
from .problem import FEAS_TOL, PresolveStatus
from .sparse import SparseDualMatrix
from .stats import StatsTracker

INF = math.inf

#: Minimum pivot magnitude for eliminations that divide by a coefficient.
PIVOT_TOL = 1e-7

#: A tightening must improve a bound by at least this (relative) to be applied.
BOUND_IMPROVE_TOL = 1e-9


def improves_lower(new: float, old: float) -> bool:
    if old == -INF:
        return new > -INF
    return new > old + BOUND_IMPROVE_TOL * (1.0 + abs(old))


def improves_upper(new: float, old: float) -> bool:
    if old == INF:
        return new < INF
    return new < old - BOUND_IMPROVE_TOL * (1.0 + abs(old))


class PresolveContext:
    """Mutable working state shared by the reductions and explorers."""

    def __init__(
        self,
        matrix: SparseDualMatrix,
        c: np.ndarray,
        offset: float,
        row_lower: np.ndarray,
        row_upper: np.ndarray,
        col_lower: np.ndarray,
        col_upper: np.ndarray,
        config,
    ) -> None:
        self.matrix = matrix
        self.c = c
        self.offset = float(offset)
        self.row_lower = row_lower
        self.row_upper = row_upper
        self.col_lower = col_lower
        self.col_upper = col_upper
        self.config = config
        self.stats = StatsTracker(matrix, col_lower, col_upper, row_lower, row_upper)
        self.journal = PostsolveJournal(matrix.num_rows, matrix.num_cols)
        self.dirty_rows: set[int] = set()
        self.dirty_cols: set[int] = set()
        self.verdict: PresolveStatus | None = None
        self.reductions_applied = 0

    def mark_row(self, i: int) -> None:
        if self.matrix.row_is_alive(i):
            self.dirty_rows.add(i)

    def mark_col(self, k: int) -> None:
        if self.matrix.col_is_alive(k):
            self.dirty_cols.add(k)

    def set_verdict(self, verdict: PresolveStatus) -> None:
        """Record a terminal verdict; primal infeasibility takes precedence."""
        if self.verdict is None:
            self.verdict = verdict
        elif (
            self.verdict is PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL
            and verdict is PresolveStatus.INFEASIBLE_PRIMAL
        ):
            self.verdict = verdict

    def is_equality(self, i: int) -> bool:
        bl = self.row_lower[i]
        return bl == self.row_upper[i] and math.isfinite(bl)

    def row_rhs(self, i: int) -> float:
        """Representative right-hand side of an equality row."""
        return 0.5 * (self.row_lower[i] + self.row_upper[i])


def fix_variable(
    ctx: PresolveContext,
    k: int,
    value: float,
    cause: FixingCause,
    cause_row: int = -1,
    cause_coeff: float = 0.0,
) -> None:
    """Fix x_k = value and delete column k.

    Finite row sides shift by -a_ik * value; the objective gains c_k * value.
    The value is clamped onto [lb, ub] when it strays within FEAS_TOL; a
    larger violation is a caller bug.
    """
    lb = float(ctx.col_lower[k])
    ub = float(ctx.col_upper[k])
    if value < lb:
        if value < lb - FEAS_TOL:
            raise ValueError(f"fixing value {value} below lower bound {lb}")
        value = lb
    if value > ub:
        if value > ub + FEAS_TOL:
            raise ValueError(f"fixing value {value} above upper bound {ub}")
        value = ub
    column = sorted(ctx.matrix.col_entries(k))
    ctx.journal.append(
        FixVariable(
            k,
            value,
            float(ctx.c[k]),
            lb,
            ub,
            cause,
            cause_row,
            cause_coeff,
            column,
        )
    )
    removed = ctx.matrix.delete_col(k)
    for i, a in removed:
        ctx.stats.on_entry_change(i, k, a, 0.0)
    if value != 0.0:
        for i, a in removed:
            if ctx.row_lower[i] > -INF:
                ctx.row_lower[i] -= a * value
            if ctx.row_upper[i] < INF:
                ctx.row_upper[i] -= a * value
    ctx.offset += float(ctx.c[k]) * value
    for i, _ in removed:
        ctx.mark_row(i)
    ctx.dirty_cols.discard(k)
    ctx.reductions_applied += 1


def remove_constraint(
    ctx: PresolveContext,
    i: int,
    cause: RemovalCause,
    kept: int = -1,
    scale: float = 0.0,
    lower_from_removed: bool = False,
    upper_from_removed: bool = False,
) -> None:
    """Delete row i, saving its span and sides for replay."""
    entries = sorted(ctx.matrix.row_entries(i))
    ctx.journal.append(
        RemoveConstraint(
            i,
            float(ctx.row_lower[i]),
            float(ctx.row_upper[i]),
            cause,
            kept,
            scale,
            lower_from_removed,
            upper_from_removed,
            entries,
        )
    )
    removed = ctx.matrix.delete_row(i)
    for k, a in removed:
        ctx.stats.on_entry_change(i, k, a, 0.0)
        ctx.mark_col(k)
    ctx.dirty_rows.discard(i)
    ctx.reductions_applied += 1


def change_bounds(
    ctx: PresolveContext,
    k: int,
    new_lb: float,
    new_ub: float,
    inducing_row: int | None = None,
) -> None:
    """Replace the bounds of column k.

    ``inducing_row`` names the constraint whose activity implied the change;
    its snapshot lets postsolve shift a reduced cost stranded on an implied
    bound into that row's dual.
    """
    old_lb = float(ctx.col_lower[k])
    old_ub = float(ctx.col_upper[k])
    snapshot = None
    if inducing_row is not None:
        snapshot = RowSnapshot(
            inducing_row,
            sorted(ctx.matrix.row_entries(inducing_row)),
            float(ctx.row_lower[inducing_row]),
            float(ctx.row_upper[inducing_row]),
        )
    ctx.journal.append(ChangeBounds(k, old_lb, old_ub, new_lb, new_ub, snapshot))
    ctx.col_lower[k] = new_lb
    ctx.col_upper[k] = new_ub
    for i in ctx.stats.on_bound_change(k, old_lb, old_ub, new_lb, new_ub):
        ctx.mark_row(i)
    ctx.mark_col(k)
    ctx.reductions_applied += 1


def change_row_sides(ctx: PresolveContext, i: int, new_bl: float, new_bu: float) -> None:
    """Replace the sides of row i (relaxation or equality conversion)."""
    old_bl = float(ctx.row_lower[i])
    old_bu = float(ctx.row_upper[i])
    ctx.journal.append(ChangeRowSides(i, old_bl, old_bu, new_bl, new_bu))
    ctx.row_lower[i] = new_bl
    ctx.row_upper[i] = new_bu
    ctx.stats.on_row_sides_change(i, old_bl, old_bu, new_bl, new_bu)
    ctx.mark_row(i)
    for k, _ in ctx.matrix.row_entries(i):
        ctx.mark_col(k)
    ctx.reductions_applied += 1


def add_scaled_equality(
    ctx: PresolveContext,
    src: int,
    dst: int,
    scale: float,
    cancel_col: int | None = None,
) -> None:
    """dst row += scale * src row, where src is an equality row.

    The destination's finite sides shift by scale * rhs(src), keeping the
    constraint set equivalent. ``cancel_col`` forces an intended exact
    cancellation (see sparse store).
    """
    if not ctx.is_equality(src):
        raise ValueError(f"row {src} is not an equality row")
    ctx.journal.append(AddScaledEqualityRow(src, dst, scale))
    for k, old, new in ctx.matrix.add_scaled_row(src, dst, scale, cancel_col):
        ctx.stats.on_entry_change(dst, k, old, new)
        ctx.mark_col(k)
    rhs = ctx.row_rhs(src)
    if ctx.row_lower[dst] > -INF:
        ctx.row_lower[dst] += scale * rhs
    if ctx.row_upper[dst] < INF:
        ctx.row_upper[dst] += scale * rhs
    ctx.mark_row(dst)
    ctx.reductions_applied += 1


def substitute_singleton(ctx: PresolveContext, k: int, i: int) -> None:
    """Substitute out column k, whose only entry sits in equality row i.

    Solving the row for x_k and eliminating it moves c_k into the other
    coefficients of the row and the offset; both the row and the column
    disappear. Caller must have established that k's bounds are implied by
    the row (or that k is free) and that the pivot is sound.
    """
    a = ctx.matrix.get(i, k)
    if abs(a) < PIVOT_TOL:
        raise ValueError(f"pivot {a} too small to substitute")
    entries = sorted(ctx.matrix.row_entries(i))
    rhs = ctx.row_rhs(i)
    cost = float(ctx.c[k])
    ctx.journal.append(SubstituteSingleton(k, i, a, cost, rhs, entries))
    if cost != 0.0:
        for j, aij in entries:
            if j != k:
                ctx.c[j] -= cost * aij / a
        ctx.offset += cost * rhs / a
    removed = ctx.matrix.delete_row(i)
    for j, aij in removed:
        ctx.stats.on_entry_change(i, j, aij, 0.0)
        ctx.mark_col(j)
    ctx.matrix.delete_col(k)
    ctx.dirty_rows.discard(i)
    ctx.dirty_cols.discard(k)
    ctx.reductions_applied += 1


def aggregate_parallel_columns(ctx: PresolveContext, p: int, q: int, s: float) -> None:
    """Merge column q into parallel column p (col_q = s * col_p).

    The kept variable becomes w = x_p + s * x_q with interval-summed bounds;
    its cost already represents both since c_q = s * c_p within tolerance.
    """
    lp = float(ctx.col_lower[p])
    up = float(ctx.col_upper[p])
    lq = float(ctx.col_lower[q])
    uq = float(ctx.col_upper[q])
    ctx.journal.append(
        AggregateParallelColumns(p, q, s, lp, up, lq, uq, float(ctx.c[q]))
    )
    removed = ctx.matrix.delete_col(q)
    for i, a in removed:
        ctx.stats.on_entry_change(i, q, a, 0.0)
        ctx.mark_row(i)
    if s > 0:
        new_lb = lp + s * lq
        new_ub = up + s * uq
    else:
        new_lb = lp + s * uq
        new_ub = up + s * lq
    ctx.col_lower[p] = new_lb
    ctx.col_upper[p] = new_ub
    for i in ctx.stats.on_bound_change(p, lp, up, new_lb, new_ub):
        ctx.mark_row(i)
    ctx.mark_col(p)
    ctx.dirty_cols.discard(q)
    ctx.reductions_applied += 1
