"""Fast explorers: reductions found by scanning the tracked statistics.

Each explorer takes the presolve context plus the candidate row/column lists
for this pass and applies reductions directly through the engine. They stop
as soon as a terminal verdict is set. All of them re-check liveness and the
triggering condition per candidate, because earlier candidates in the same
pass may have changed the problem.
"""

from __future__ import annotations

import math

from .journal import FixingCause, RemovalCause
from .problem import FEAS_TOL, PresolveStatus
from .reductions import (
    PIVOT_TOL,
    PresolveContext,
    add_scaled_equality,
    change_bounds,
    change_row_sides,
    fix_variable,
    improves_lower,
    improves_upper,
    remove_constraint,
    substitute_singleton,
)

INF = math.inf


def singleton_rows(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Resolve rows with zero or one live entry.

    Empty rows are removed (or prove infeasibility). A singleton equality
    pins its variable; a singleton inequality transfers its sides onto the
    variable's bounds, after which the row is implied and removed.
    """
    for i in rows:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.row_is_alive(i):
            continue
        nnz = ctx.stats.row_nnz[i]
        if nnz == 0:
            if ctx.row_lower[i] <= FEAS_TOL and ctx.row_upper[i] >= -FEAS_TOL:
                remove_constraint(ctx, i, RemovalCause.EMPTY)
            else:
                ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
            continue
        if nnz != 1:
            continue
        ((k, a),) = ctx.matrix.row_entries(i)
        lb = float(ctx.col_lower[k])
        ub = float(ctx.col_upper[k])
        if ctx.is_equality(i):
            value = ctx.row_rhs(i) / a
            if value < lb - FEAS_TOL or value > ub + FEAS_TOL:
                ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
                continue
            fix_variable(
                ctx, k, value, FixingCause.SINGLETON_ROW, cause_row=i, cause_coeff=a
            )
            remove_constraint(ctx, i, RemovalCause.EMPTY)
            continue
        bl = float(ctx.row_lower[i])
        bu = float(ctx.row_upper[i])
        if a > 0:
            implied_lo = bl / a
            implied_hi = bu / a
        else:
            implied_lo = bu / a
            implied_hi = bl / a
        new_lb = max(lb, implied_lo)
        new_ub = min(ub, implied_hi)
        if new_lb > new_ub + FEAS_TOL:
            ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
            continue
        lower_better = improves_lower(new_lb, lb)
        upper_better = improves_upper(new_ub, ub)
        if lower_better or upper_better:
            final_lb = new_lb if lower_better else lb
            final_ub = new_ub if upper_better else ub
            if final_lb > final_ub:
                # crossed within tolerance: collapse to the midpoint
                final_lb = final_ub = 0.5 * (final_lb + final_ub)
            change_bounds(ctx, k, final_lb, final_ub, inducing_row=i)
            remove_constraint(ctx, i, RemovalCause.FORCED_SINGLETON)
        else:
            # the variable's bounds already imply the row
            remove_constraint(ctx, i, RemovalCause.REDUNDANT)


def redundant_constraints(
    ctx: PresolveContext, rows: list[int], cols: list[int]
) -> None:
    """Drop rows implied by the variable bounds; relax one-sided implications.

    A row whose activity range cannot reach a side proves infeasibility.
    """
    for i in rows:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.row_is_alive(i):
            continue
        mn = ctx.stats.minact(i)
        mx = ctx.stats.maxact(i)
        bl = float(ctx.row_lower[i])
        bu = float(ctx.row_upper[i])
        if mn > bu + FEAS_TOL or mx < bl - FEAS_TOL:
            ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
            continue
        lower_implied = bl == -INF or mn >= bl - FEAS_TOL
        upper_implied = bu == INF or mx <= bu + FEAS_TOL
        if lower_implied and upper_implied:
            remove_constraint(ctx, i, RemovalCause.REDUNDANT)
        elif lower_implied and bl > -INF:
            change_row_sides(ctx, i, -INF, bu)
        elif upper_implied and bu < INF:
            change_row_sides(ctx, i, bl, INF)


def doubleton_rows(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Eliminate one variable of every two-variable equality row.

    Three-step recipe: transfer the eliminated variable's bounds onto the
    survivor through the equality, cancel the eliminated variable from every
    other row it appears in, then substitute it out. Net effect is one less
    row and one less column.
    """
    for i in rows:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.row_is_alive(i):
            continue
        if ctx.stats.row_nnz[i] != 2 or not ctx.is_equality(i):
            continue
        (p, ap), (q, aq) = sorted(ctx.matrix.row_entries(i))
        if abs(ap) < PIVOT_TOL or abs(aq) < PIVOT_TOL:
            continue
        # eliminate the sparser column; prefer the larger pivot on ties
        if (ctx.stats.col_nnz[p], -abs(ap), p) <= (ctx.stats.col_nnz[q], -abs(aq), q):
            e, ae, s, a_s = p, ap, q, aq
        else:
            e, ae, s, a_s = q, aq, p, ap
        rhs = ctx.row_rhs(i)
        le = float(ctx.col_lower[e])
        ue = float(ctx.col_upper[e])
        t1 = (rhs - ae * le) / a_s
        t2 = (rhs - ae * ue) / a_s
        implied_lo = min(t1, t2)
        implied_hi = max(t1, t2)
        ls = float(ctx.col_lower[s])
        us = float(ctx.col_upper[s])
        new_lb = max(ls, implied_lo)
        new_ub = min(us, implied_hi)
        if new_lb > new_ub + FEAS_TOL:
            ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
            continue
        lower_better = improves_lower(new_lb, ls)
        upper_better = improves_upper(new_ub, us)
        if lower_better or upper_better:
            final_lb = new_lb if lower_better else ls
            final_ub = new_ub if upper_better else us
            if final_lb > final_ub:
                final_lb = final_ub = 0.5 * (final_lb + final_ub)
            change_bounds(ctx, s, final_lb, final_ub, inducing_row=i)
        # e's bounds are now implied by the row and s's bounds
        if le > -INF or ue < INF:
            change_bounds(ctx, e, -INF, INF, inducing_row=i)
        for r, a_re in ctx.matrix.col_entries(e):
            if r != i:
                add_scaled_equality(ctx, i, r, -a_re / ae, cancel_col=e)
        substitute_singleton(ctx, e, i)


def column_singleton_equality(
    ctx: PresolveContext, rows: list[int], cols: list[int]
) -> None:
    """Substitute out implied-free singleton columns in equality rows."""
    for k in cols:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.col_is_alive(k) or ctx.stats.col_nnz[k] != 1:
            continue
        ((i, a),) = ctx.matrix.col_entries(k)
        if not ctx.is_equality(i) or abs(a) < PIVOT_TOL:
            continue
        rhs = ctx.row_rhs(i)
        rmin = ctx.stats.residual_min(i, k, a)
        rmax = ctx.stats.residual_max(i, k, a)
        if a > 0:
            implied_lo = (rhs - rmax) / a
            implied_hi = (rhs - rmin) / a
        else:
            implied_lo = (rhs - rmin) / a
            implied_hi = (rhs - rmax) / a
        if (
            implied_lo >= ctx.col_lower[k] - FEAS_TOL
            and implied_hi <= ctx.col_upper[k] + FEAS_TOL
        ):
            substitute_singleton(ctx, k, i)


def variable_locks(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Fix variables whose locks prove a bound is optimal.

    With no uplocks nothing stops the variable from rising: negative cost
    pushes it to its upper bound (unbounded if there is none), zero cost
    allows fixing there too under strong dual exploration. Mirrored for
    downlocks. Collapsed bounds are fixed outright.
    """
    strong = bool(getattr(ctx.config, "strong_dual", True))
    for k in cols:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.col_is_alive(k):
            continue
        lb = float(ctx.col_lower[k])
        ub = float(ctx.col_upper[k])
        if ub - lb <= FEAS_TOL:
            fix_variable(ctx, k, 0.5 * (lb + ub), FixingCause.INTERIOR)
            continue
        if ctx.stats.col_nnz[k] == 0:
            # a column in no rows is an objective-only choice; leave it to
            # the solver so structural reductions stay the whole story
            continue
        ck = float(ctx.c[k])
        if ctx.stats.uplocks[k] == 0:
            if ck < -FEAS_TOL:
                if ub == INF:
                    ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
                else:
                    fix_variable(ctx, k, ub, FixingCause.AT_UPPER)
                continue
            if abs(ck) <= FEAS_TOL and strong and ub < INF:
                fix_variable(ctx, k, ub, FixingCause.AT_UPPER)
                continue
        if ctx.stats.downlocks[k] == 0:
            if ck > FEAS_TOL:
                if lb == -INF:
                    ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
                else:
                    fix_variable(ctx, k, lb, FixingCause.AT_LOWER)
                continue
            if abs(ck) <= FEAS_TOL and strong and lb > -INF:
                fix_variable(ctx, k, lb, FixingCause.AT_LOWER)


def column_singleton_inequality(
    ctx: PresolveContext, rows: list[int], cols: list[int]
) -> None:
    """Exploit singleton columns in inequality rows via the dual constraint.

    The column's reduced cost is z_k = c_k - a*y_i with y_i sign-restricted
    by the row's sides. If z_k is forced one-signed, the variable sits at
    the complementary bound in every optimal solution. If the variable is
    free, z_k = 0 pins y_i = c_k/a; a nonzero pin means the row is active on
    the matching side, so it becomes an equality.
    """
    for k in cols:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.col_is_alive(k) or ctx.stats.col_nnz[k] != 1:
            continue
        ((i, a),) = ctx.matrix.col_entries(k)
        if ctx.is_equality(i):
            continue
        bl = float(ctx.row_lower[i])
        bu = float(ctx.row_upper[i])
        if bl == -INF and bu == INF:
            continue
        ylo = 0.0 if bu == INF else -INF
        yhi = 0.0 if bl == -INF else INF
        if a > 0:
            zlo = ctx.c[k] - a * yhi
            zhi = ctx.c[k] - a * ylo
        else:
            zlo = ctx.c[k] - a * ylo
            zhi = ctx.c[k] - a * yhi
        lb = float(ctx.col_lower[k])
        ub = float(ctx.col_upper[k])
        if zlo > FEAS_TOL:
            if lb == -INF:
                ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
            else:
                fix_variable(ctx, k, lb, FixingCause.AT_LOWER)
            continue
        if zhi < -FEAS_TOL:
            if ub == INF:
                ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
            else:
                fix_variable(ctx, k, ub, FixingCause.AT_UPPER)
            continue
        if lb == -INF and ub == INF and abs(a) >= PIVOT_TOL:
            ystar = ctx.c[k] / a
            if abs(ystar) <= FEAS_TOL:
                continue
            if ystar < ylo - FEAS_TOL or ystar > yhi + FEAS_TOL:
                ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
            elif ystar > 0:
                change_row_sides(ctx, i, bl, bl)
            else:
                change_row_sides(ctx, i, bu, bu)
