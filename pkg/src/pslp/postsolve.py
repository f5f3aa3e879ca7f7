"""Reverse journal replay: reduced-space solutions back to original space.

Replay walks the records newest to oldest; each handler turns a valid
primal-dual point of the problem after its reduction into one of the
problem before it, so induction over the journal yields a point of the
original problem. All data needed here was snapshotted at reduction time.

Dual recovery notes (the non-obvious handlers):

* A variable fixed by a singleton equality row may come back with a reduced
  cost whose sign disagrees with its position inside its original bounds.
  The violation is pushed into the removed row's dual: shifting y_i by
  z_k / a_ik zeroes z_k, and the row is an equality, so any dual sign is
  admissible.
* A bound tightened from a row snapshot: if the point rides the implied
  bound (strictly inside the original one) with a sign-consistent reduced
  cost, that bound is supported by the inducing row, which must then be
  exactly binding. Shifting delta = z_k / a_ik onto the row's dual and
  subtracting a_j * delta from every column in the row restores dual
  feasibility and complementarity simultaneously.
* Parallel rows: the kept row's dual moves to the removed one (scaled by
  1/s) only when the binding side of the merged range originated from the
  removed row.

Repairs that cannot fire cleanly (approximate inputs) are skipped rather
than raised; the resulting violation shows up in the KKT report.
"""

from __future__ import annotations

import math

import numpy as np

from .journal import (
    AddScaledEqualityRow,
    AggregateParallelColumns,
    ChangeBounds,
    ChangeRowSides,
    FixingCause,
    FixVariable,
    PostsolveJournal,
    RemovalCause,
    RemoveConstraint,
    SubstituteSingleton,
)
from .problem import PrimalDualSolution

INF = math.inf

#: Reduced costs below this magnitude are treated as zero during recovery.
DUAL_TOL = 1e-9

#: How close a primal value must be to a bound to count as sitting on it.
POSITION_TOL = 1e-7


def _replay_fix(rec: FixVariable, x, y, z, dual_tol: float, position_tol: float) -> None:
    x[rec.col] = rec.value
    z0 = rec.cost
    for i, a in rec.column:
        z0 -= a * y[i]
    if rec.cause == FixingCause.SINGLETON_ROW and rec.cause_row >= 0 and rec.cause_coeff != 0.0:
        at_lower = rec.value <= rec.lb + position_tol
        at_upper = rec.value >= rec.ub - position_tol
        if (z0 > dual_tol and not at_lower) or (z0 < -dual_tol and not at_upper):
            y[rec.cause_row] += z0 / rec.cause_coeff
            z[rec.col] = 0.0
            return
    z[rec.col] = z0


def _replay_remove(rec: RemoveConstraint, x, y, z, dual_tol: float) -> None:
    if rec.cause == RemovalCause.PARALLEL and rec.kept >= 0 and rec.scale != 0.0:
        y_kept = y[rec.kept]
        if (y_kept > dual_tol and rec.lower_from_removed) or (
            y_kept < -dual_tol and rec.upper_from_removed
        ):
            y[rec.row] = y_kept / rec.scale
            y[rec.kept] = 0.0
            return
    y[rec.row] = 0.0


def _replay_substitute(rec: SubstituteSingleton, x, y, z) -> None:
    acc = rec.rhs
    for j, a in rec.entries:
        if j != rec.col:
            acc -= a * x[j]
    x[rec.col] = acc / rec.coeff
    y[rec.row] = rec.cost / rec.coeff
    z[rec.col] = 0.0


def _replay_change_bounds(
    rec: ChangeBounds, x, y, z, dual_tol: float, position_tol: float
) -> None:
    if rec.inducing is None:
        return
    zk = z[rec.col]
    xk = x[rec.col]
    repair = False
    if (
        zk > dual_tol
        and rec.new_lb < INF
        and abs(xk - rec.new_lb) <= position_tol
        and (rec.old_lb == -INF or xk > rec.old_lb + position_tol)
    ):
        repair = True
    elif (
        zk < -dual_tol
        and rec.new_ub > -INF
        and abs(xk - rec.new_ub) <= position_tol
        and (rec.old_ub == INF or xk < rec.old_ub - position_tol)
    ):
        repair = True
    if not repair:
        return
    coeff = 0.0
    for j, a in rec.inducing.entries:
        if j == rec.col:
            coeff = a
            break
    if coeff == 0.0:
        return
    delta = zk / coeff
    y[rec.inducing.row] += delta
    for j, a in rec.inducing.entries:
        z[j] -= a * delta


def _replay_aggregate(rec: AggregateParallelColumns, x, y, z, dual_tol: float) -> None:
    w = x[rec.kept]
    zp = z[rec.kept]
    s = rec.scale
    if s > 0:
        q_lo = max(rec.removed_lb, (w - rec.kept_ub) / s)
        q_hi = min(rec.removed_ub, (w - rec.kept_lb) / s)
    else:
        q_lo = max(rec.removed_lb, (w - rec.kept_lb) / s)
        q_hi = min(rec.removed_ub, (w - rec.kept_ub) / s)
    if zp > dual_tol:
        target = rec.removed_lb if s > 0 else rec.removed_ub
    elif zp < -dual_tol:
        target = rec.removed_ub if s > 0 else rec.removed_lb
    elif rec.removed_lb > -INF:
        target = rec.removed_lb
    elif rec.removed_ub < INF:
        target = rec.removed_ub
    else:
        target = 0.0
    if q_lo > q_hi:
        xq = 0.5 * (q_lo + q_hi)
    else:
        xq = min(max(target, q_lo), q_hi)
    if not math.isfinite(xq):
        if math.isfinite(q_lo):
            xq = q_lo
        elif math.isfinite(q_hi):
            xq = q_hi
        else:
            xq = 0.0
    x[rec.kept] = w - s * xq
    x[rec.removed] = xq
    z[rec.removed] = s * zp


def postsolve(
    journal: PostsolveJournal,
    reduced_solution: PrimalDualSolution,
    *,
    dual_tol: float = DUAL_TOL,
    position_tol: float = POSITION_TOL,
) -> PrimalDualSolution:
    """Map a solution of the reduced problem to one of the original problem.

    Pure in both arguments; replaying twice gives identical output.
    """
    if reduced_solution.x.shape[0] != journal.reduced_cols:
        raise ValueError(
            f"solution has {reduced_solution.x.shape[0]} columns, "
            f"journal expects {journal.reduced_cols}"
        )
    if reduced_solution.y.shape[0] != journal.reduced_rows:
        raise ValueError(
            f"solution has {reduced_solution.y.shape[0]} rows, "
            f"journal expects {journal.reduced_rows}"
        )
    if reduced_solution.z.shape[0] != journal.reduced_cols:
        raise ValueError("z length does not match journal's reduced columns")

    x = np.zeros(journal.original_cols)
    y = np.zeros(journal.original_rows)
    z = np.zeros(journal.original_cols)
    for i in range(journal.original_rows):
        r = int(journal.row_map[i])
        if r >= 0:
            y[i] = reduced_solution.y[r]
    for k in range(journal.original_cols):
        c = int(journal.col_map[k])
        if c >= 0:
            x[k] = reduced_solution.x[c]
            z[k] = reduced_solution.z[c]

    for rec in reversed(journal.records):
        if isinstance(rec, FixVariable):
            _replay_fix(rec, x, y, z, dual_tol, position_tol)
        elif isinstance(rec, RemoveConstraint):
            _replay_remove(rec, x, y, z, dual_tol)
        elif isinstance(rec, AddScaledEqualityRow):
            y[rec.src] += rec.scale * y[rec.dst]
        elif isinstance(rec, SubstituteSingleton):
            _replay_substitute(rec, x, y, z)
        elif isinstance(rec, ChangeBounds):
            _replay_change_bounds(rec, x, y, z, dual_tol, position_tol)
        elif isinstance(rec, ChangeRowSides):
            pass
        elif isinstance(rec, AggregateParallelColumns):
            _replay_aggregate(rec, x, y, z, dual_tol)
        else:  # pragma: no cover - new record types must be handled here
            raise TypeError(f"unknown journal record {type(rec).__name__}")

    return PrimalDualSolution(x, y, z, reduced_solution.status)
