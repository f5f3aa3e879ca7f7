"""Medium explorers: parallel structure detection and bound propagation.

Parallel rows/columns are found by hashing spans normalized by the entry of
the smallest live index, with a fixed decimal rounding so that exact
scalings can never be split by float noise, followed by pairwise
verification within each bucket.

Dual propagation works on sign intervals: each row dual is sign-restricted
by which sides are finite, each reduced cost by which bounds are finite,
and every dual constraint (column) is propagated once per pass. Conclusions
are queued during analysis and re-verified against the live problem right
before being applied: a conversion changes the sign information other
queued conclusions may have relied on, and applying a stale conclusion can
be unsound (it may cut optimal rays), so only conclusions whose certificate
still holds at application time go through.
"""

from __future__ import annotations

import math

from .journal import FixingCause, RemovalCause
from .problem import FEAS_TOL, PresolveStatus
from .reductions import (
    PresolveContext,
    aggregate_parallel_columns,
    change_bounds,
    change_row_sides,
    fix_variable,
    improves_lower,
    improves_upper,
    remove_constraint,
)

INF = math.inf

#: Relative tolerance for pairwise parallelism verification.
PARALLEL_TOL = 1e-10


def _canon(v: float) -> float:
    """Round to 12 significant digits; hash keys use this canonical form."""
    return float(f"{v:.12e}")


def parallel_rows(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Merge rows that are scalar multiples of each other.

    Scans all alive rows regardless of dirtiness (a clean row can be
    parallel to a dirty one). The first row of each bucket survives; every
    verified partner has its sides rescaled onto the survivor and is
    removed.
    """
    buckets: dict[tuple, list[tuple[int, list[tuple[int, float]], float]]] = {}
    for j in range(ctx.matrix.num_rows):
        if ctx.verdict is not None:
            return
        if not ctx.matrix.row_is_alive(j) or ctx.stats.row_nnz[j] == 0:
            continue
        entries = sorted(ctx.matrix.row_entries(j))
        pivot = entries[0][1]
        key = (
            len(entries),
            tuple(k for k, _ in entries),
            tuple(_canon(v / pivot) for _, v in entries),
        )
        bucket = buckets.setdefault(key, [])
        merged = False
        for leader, lead_entries, lead_pivot in bucket:
            s = pivot / lead_pivot
            ok = True
            for (_, v_lead), (_, v) in zip(lead_entries, entries):
                scaled = s * v_lead
                if abs(v - scaled) > PARALLEL_TOL * max(abs(v), abs(scaled)):
                    ok = False
                    break
            if not ok:
                continue
            bl_j = float(ctx.row_lower[j])
            bu_j = float(ctx.row_upper[j])
            if s > 0:
                rlo, rhi = bl_j / s, bu_j / s
            else:
                rlo, rhi = bu_j / s, bl_j / s
            bl_keep = float(ctx.row_lower[leader])
            bu_keep = float(ctx.row_upper[leader])
            new_lo = max(bl_keep, rlo)
            new_hi = min(bu_keep, rhi)
            if new_lo > new_hi + FEAS_TOL:
                ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
                return
            if new_lo > new_hi:
                new_lo = new_hi = 0.5 * (new_lo + new_hi)
            if new_lo != bl_keep or new_hi != bu_keep:
                change_row_sides(ctx, leader, new_lo, new_hi)
            remove_constraint(
                ctx,
                j,
                RemovalCause.PARALLEL,
                kept=leader,
                scale=s,
                lower_from_removed=rlo > bl_keep,
                upper_from_removed=rhi < bu_keep,
            )
            merged = True
            break
        if not merged:
            bucket.append((j, entries, pivot))


def parallel_columns(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Aggregate columns that are scalar multiples with matching costs.

    Columns p, q with col_q = s * col_p can merge only when c_q = s * c_p
    too (otherwise one dominates, which is a different reduction, skipped).
    The merged variable w = x_p + s * x_q lives in the interval sum of the
    two boxes.
    """
    buckets: dict[tuple, list[tuple[int, list[tuple[int, float]], float]]] = {}
    for q in range(ctx.matrix.num_cols):
        if ctx.verdict is not None:
            return
        if not ctx.matrix.col_is_alive(q) or ctx.stats.col_nnz[q] == 0:
            continue
        entries = sorted(ctx.matrix.col_entries(q))
        pivot = entries[0][1]
        cost = float(ctx.c[q])
        key = (
            len(entries),
            tuple(i for i, _ in entries),
            tuple(_canon(v / pivot) for _, v in entries),
            _canon(cost / pivot),
        )
        bucket = buckets.setdefault(key, [])
        merged = False
        for leader, lead_entries, lead_pivot in bucket:
            s = pivot / lead_pivot
            scaled_cost = s * float(ctx.c[leader])
            if abs(cost - scaled_cost) > PARALLEL_TOL * (
                1.0 + max(abs(cost), abs(scaled_cost))
            ):
                continue
            ok = True
            for (_, v_lead), (_, v) in zip(lead_entries, entries):
                scaled = s * v_lead
                if abs(v - scaled) > PARALLEL_TOL * max(abs(v), abs(scaled)):
                    ok = False
                    break
            if not ok:
                continue
            aggregate_parallel_columns(ctx, leader, q, s)
            merged = True
            break
        if not merged:
            bucket.append((q, entries, pivot))


def primal_propagation(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Tighten variable bounds implied by the dirty constraints.

    Each candidate row is propagated once: for every entry, the residual
    activity of the rest of the row plus a finite side bounds the variable.
    """
    for i in rows:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.row_is_alive(i):
            continue
        bl = float(ctx.row_lower[i])
        bu = float(ctx.row_upper[i])
        if bl == -INF and bu == INF:
            continue
        for k, a in ctx.matrix.row_entries(i):
            cand_lb = -INF
            cand_ub = INF
            if a > 0:
                if bl > -INF:
                    rmax = ctx.stats.residual_max(i, k, a)
                    if rmax < INF:
                        cand_lb = (bl - rmax) / a
                if bu < INF:
                    rmin = ctx.stats.residual_min(i, k, a)
                    if rmin > -INF:
                        cand_ub = (bu - rmin) / a
            else:
                if bl > -INF:
                    rmax = ctx.stats.residual_max(i, k, a)
                    if rmax < INF:
                        cand_ub = (bl - rmax) / a
                if bu < INF:
                    rmin = ctx.stats.residual_min(i, k, a)
                    if rmin > -INF:
                        cand_lb = (bu - rmin) / a
            lb = float(ctx.col_lower[k])
            ub = float(ctx.col_upper[k])
            new_lb = cand_lb if improves_lower(cand_lb, lb) else lb
            new_ub = cand_ub if improves_upper(cand_ub, ub) else ub
            if new_lb == lb and new_ub == ub:
                continue
            if new_lb > new_ub + FEAS_TOL:
                ctx.set_verdict(PresolveStatus.INFEASIBLE_PRIMAL)
                return
            if new_lb > new_ub:
                new_lb = new_ub = 0.5 * (new_lb + new_ub)
            change_bounds(ctx, k, new_lb, new_ub, inducing_row=i)


def _row_dual_range(ctx: PresolveContext, i: int) -> tuple[float, float]:
    """Sign range of y_i from side finiteness; a two-sided-infinite row
    pins y_i = 0."""
    bl = ctx.row_lower[i]
    bu = ctx.row_upper[i]
    if bl == -INF and bu == INF:
        return 0.0, 0.0
    return (0.0 if bu == INF else -INF), (0.0 if bl == -INF else INF)


def _col_z_range(ctx: PresolveContext, k: int) -> tuple[float, float]:
    """Sign range of the reduced cost z_k from bound finiteness."""
    lb = ctx.col_lower[k]
    ub = ctx.col_upper[k]
    if lb == -INF and ub == INF:
        return 0.0, 0.0
    if lb == -INF:
        return -INF, 0.0
    if ub == INF:
        return 0.0, INF
    return -INF, INF


class _ColumnDual:
    """Sign-interval view of one dual constraint c_k - sum a_ik y_i = z_k."""

    def __init__(self, ctx: PresolveContext, k: int) -> None:
        self.entries = sorted(ctx.matrix.col_entries(k))
        self.los: list[float] = []
        self.his: list[float] = []
        self.lo_fin = 0.0
        self.lo_inf = 0
        self.hi_fin = 0.0
        self.hi_inf = 0
        for i, a in self.entries:
            ylo, yhi = _row_dual_range(ctx, i)
            if a > 0:
                clo, chi = a * ylo, a * yhi
            else:
                clo, chi = a * yhi, a * ylo
            self.los.append(clo)
            self.his.append(chi)
            if clo == -INF:
                self.lo_inf += 1
            else:
                self.lo_fin += clo
            if chi == INF:
                self.hi_inf += 1
            else:
                self.hi_fin += chi
        ck = float(ctx.c[k])
        sum_lo = -INF if self.lo_inf else self.lo_fin
        sum_hi = INF if self.hi_inf else self.hi_fin
        self.z_implied = (ck - sum_hi, ck - sum_lo)
        self.zlo, self.zhi = _col_z_range(ctx, k)
        self.ck = ck

    def dual_interval(self, t: int) -> tuple[float, float]:
        """Interval for y of the t-th entry, isolating it in the constraint."""
        clo = self.los[t]
        chi = self.his[t]
        res_lo_inf = self.lo_inf - (1 if clo == -INF else 0)
        res_lo = -INF if res_lo_inf else self.lo_fin - (clo if clo != -INF else 0.0)
        res_hi_inf = self.hi_inf - (1 if chi == INF else 0)
        res_hi = INF if res_hi_inf else self.hi_fin - (chi if chi != INF else 0.0)
        n_lo = (self.ck - self.zhi) - res_hi
        n_hi = (self.ck - self.zlo) - res_lo
        a = self.entries[t][1]
        if a > 0:
            return n_lo / a, n_hi / a
        return n_hi / a, n_lo / a


def dual_propagation(ctx: PresolveContext, rows: list[int], cols: list[int]) -> None:
    """Propagate dual sign intervals once over every alive column.

    Conclusions: a reduced cost forced one-signed fixes the variable at the
    complementary bound (or proves the dual side infeasible when that bound
    is missing); a row dual forced one-signed makes the matching side tight,
    converting the row to an equality. An empty dual interval anywhere is a
    verdict. Queued conclusions are re-verified before application (see
    module docstring).
    """
    y_low: dict[int, float] = {}
    y_high: dict[int, float] = {}
    for i in range(ctx.matrix.num_rows):
        if ctx.matrix.row_is_alive(i):
            y_low[i], y_high[i] = _row_dual_range(ctx, i)

    fixes: list[tuple[int, bool]] = []  # (col, at_lower)
    conversions: dict[int, tuple[bool, int]] = {}  # row -> (at_lower, via col)
    for k in range(ctx.matrix.num_cols):
        if not ctx.matrix.col_is_alive(k):
            continue
        if ctx.stats.col_nnz[k] == 0:
            continue  # objective-only columns are left to the solver
        data = _ColumnDual(ctx, k)
        if data.z_implied[0] > FEAS_TOL:
            fixes.append((k, True))
        elif data.z_implied[1] < -FEAS_TOL:
            fixes.append((k, False))
        for t, (i, _) in enumerate(data.entries):
            ilo, ihi = data.dual_interval(t)
            new_lo = max(y_low[i], ilo)
            new_hi = min(y_high[i], ihi)
            if new_lo > new_hi + FEAS_TOL:
                ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
                return
            y_low[i], y_high[i] = new_lo, new_hi
            if i not in conversions and not ctx.is_equality(i):
                if ilo > FEAS_TOL:
                    conversions[i] = (True, k)
                elif ihi < -FEAS_TOL:
                    conversions[i] = (False, k)

    for i in sorted(conversions):
        if ctx.verdict is not None:
            return
        at_lower, k = conversions[i]
        if not ctx.matrix.row_is_alive(i) or ctx.is_equality(i):
            continue
        if not ctx.matrix.col_is_alive(k):
            continue
        data = _ColumnDual(ctx, k)
        try:
            t = next(t for t, (r, _) in enumerate(data.entries) if r == i)
        except StopIteration:
            continue
        ilo, ihi = data.dual_interval(t)
        bl = float(ctx.row_lower[i])
        bu = float(ctx.row_upper[i])
        if at_lower and ilo > FEAS_TOL and bl > -INF:
            change_row_sides(ctx, i, bl, bl)
        elif not at_lower and ihi < -FEAS_TOL and bu < INF:
            change_row_sides(ctx, i, bu, bu)

    for k, at_lower in fixes:
        if ctx.verdict is not None:
            return
        if not ctx.matrix.col_is_alive(k) or ctx.stats.col_nnz[k] == 0:
            continue
        data = _ColumnDual(ctx, k)
        if at_lower:
            if data.z_implied[0] <= FEAS_TOL:
                continue
            lb = float(ctx.col_lower[k])
            if lb == -INF:
                ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
                return
            fix_variable(ctx, k, lb, FixingCause.AT_LOWER)
        else:
            if data.z_implied[1] >= -FEAS_TOL:
                continue
            ub = float(ctx.col_upper[k])
            if ub == INF:
                ctx.set_verdict(PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL)
                return
            fix_variable(ctx, k, ub, FixingCause.AT_UPPER)
