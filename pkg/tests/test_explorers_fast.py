"""Fast explorers: singletons, doubletons, redundancy, locks."""

import numpy as np
import pytest

from conftest import INF, all_cols, all_rows, make_ctx, make_problem
from pslp.driver import PresolveConfig
from pslp.explorers_fast import (
    column_singleton_equality,
    column_singleton_inequality,
    doubleton_rows,
    redundant_constraints,
    singleton_rows,
    variable_locks,
)
from pslp.journal import (
    AddScaledEqualityRow,
    FixingCause,
    FixVariable,
    RemovalCause,
    RemoveConstraint,
    SubstituteSingleton,
)
from pslp.problem import PresolveStatus


def run(explorer, ctx):
    explorer(ctx, all_rows(ctx), all_cols(ctx))


# --- singleton rows ---


def test_singleton_equality_fixes_variable():
    p = make_problem(
        [(0, 0, 2.0)], c=[1.0], cl=[-INF], cu=[INF], rl=[4.0], ru=[4.0]
    )
    ctx = make_ctx(p)
    run(singleton_rows, ctx)
    assert not ctx.matrix.col_is_alive(0)
    assert not ctx.matrix.row_is_alive(0)
    rec = next(r for r in ctx.journal.records if isinstance(r, FixVariable))
    assert rec.value == 2.0
    assert rec.cause == FixingCause.SINGLETON_ROW


def test_singleton_inequality_infeasible_interval():
    # -x <= -3 forces x >= 3 but the upper bound is 2
    p = make_problem(
        [(0, 0, -1.0)], c=[0.0], cl=[0.0], cu=[2.0], rl=[-INF], ru=[-3.0]
    )
    ctx = make_ctx(p)
    run(singleton_rows, ctx)
    assert ctx.verdict == PresolveStatus.INFEASIBLE_PRIMAL


def test_singleton_inequality_no_improvement_removed():
    # row says 0 <= x <= 5 while x already sits in [1,2]
    p = make_problem(
        [(0, 0, 1.0)], c=[0.0], cl=[1.0], cu=[2.0], rl=[0.0], ru=[5.0]
    )
    ctx = make_ctx(p)
    run(singleton_rows, ctx)
    assert not ctx.matrix.row_is_alive(0)
    assert ctx.col_lower[0] == 1.0
    assert ctx.col_upper[0] == 2.0


def test_singleton_inequality_tightens_bounds():
    p = make_problem(
        [(0, 0, 2.0)], c=[0.0], cl=[-INF], cu=[INF], rl=[2.0], ru=[9.0]
    )
    ctx = make_ctx(p)
    run(singleton_rows, ctx)
    assert not ctx.matrix.row_is_alive(0)
    assert ctx.col_lower[0] == 1.0
    assert ctx.col_upper[0] == 4.5


def test_empty_row_removed_or_infeasible():
    ok = make_ctx(make_problem([], c=[], cl=[], cu=[], rl=[-1.0], ru=[1.0],
                               num_rows=1, num_cols=0))
    run(singleton_rows, ok)
    assert not ok.matrix.row_is_alive(0)
    assert ok.verdict is None

    bad = make_ctx(make_problem([], c=[], cl=[], cu=[], rl=[2.0], ru=[3.0],
                                num_rows=1, num_cols=0))
    run(singleton_rows, bad)
    assert bad.verdict == PresolveStatus.INFEASIBLE_PRIMAL


# --- redundant constraints ---


def test_redundant_row_from_bounds_removed():
    # x1 >= 1 and x2 >= 2 imply x1 + 2x2 >= 5
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 2.0)],
        c=[0.0, 0.0], cl=[1.0, 2.0], cu=[INF, INF], rl=[5.0], ru=[INF],
    )
    ctx = make_ctx(p)
    run(redundant_constraints, ctx)
    assert not ctx.matrix.row_is_alive(0)
    rec = ctx.journal.records[-1]
    assert isinstance(rec, RemoveConstraint)
    assert rec.cause == RemovalCause.REDUNDANT


def test_activity_contradiction_is_infeasible():
    # max activity 4 but the row demands at least 5
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[0.0, 0.0], cl=[0.0, 0.0], cu=[2.0, 2.0], rl=[5.0], ru=[INF],
    )
    ctx = make_ctx(p)
    run(redundant_constraints, ctx)
    assert ctx.verdict == PresolveStatus.INFEASIBLE_PRIMAL


def test_one_sided_redundancy_relaxes_that_side():
    # ranged row 1 <= x <= 10 with x in [0,2]: only the upper side is implied
    p = make_problem(
        [(0, 0, 1.0)], c=[0.0], cl=[0.0], cu=[2.0], rl=[1.0], ru=[10.0]
    )
    ctx = make_ctx(p)
    run(redundant_constraints, ctx)
    assert ctx.matrix.row_is_alive(0)
    assert ctx.row_upper[0] == INF
    assert ctx.row_lower[0] == 1.0


# --- doubleton rows ---


def test_doubleton_transfers_bounds_and_substitutes():
    # x1 + x2 = 1, x1, x2 >= 0: one variable and one constraint disappear
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[0.0, 1.0], cl=[0.0, 0.0], cu=[INF, INF], rl=[1.0], ru=[1.0],
    )
    ctx = make_ctx(p)
    run(doubleton_rows, ctx)
    assert not ctx.matrix.row_is_alive(0)
    survivors = all_cols(ctx)
    assert len(survivors) == 1
    (k,) = survivors
    assert ctx.col_lower[k] == 0.0
    assert ctx.col_upper[k] == pytest.approx(1.0)
    assert any(isinstance(r, SubstituteSingleton) for r in ctx.journal.records)


def test_doubleton_bound_transfer_through_equality():
    # x1 - x2 = 0 with x1 in [0,1] and x2 free: survivor inherits [0,1]
    p = make_problem(
        [(0, 0, 1.0), (0, 1, -1.0)],
        c=[0.0, 0.0], cl=[0.0, -INF], cu=[1.0, INF], rl=[0.0], ru=[0.0],
    )
    ctx = make_ctx(p)
    run(doubleton_rows, ctx)
    survivors = all_cols(ctx)
    assert len(survivors) == 1
    (k,) = survivors
    assert ctx.col_lower[k] == 0.0
    assert ctx.col_upper[k] == 1.0


def test_doubleton_cancels_all_other_rows_first():
    # eliminated variable appears in 5 other rows: 5 cancellations, then
    # one substitution
    entries = [(0, 0, 1.0), (0, 1, 1.0)]
    for i in range(1, 6):
        entries.append((i, 0, 1.0))
        entries.append((i, 2, 1.0))
    for i in range(1, 8):
        entries.append((i if i < 6 else 5, 1, 0.25 * i))
    p = make_problem(
        entries,
        c=[0.0, 0.0, 0.0],
        cl=[-INF, -INF, -INF],
        cu=[INF, INF, INF],
        rl=[1.0] + [-INF] * 5,
        ru=[1.0] + [100.0] * 5,
    )
    ctx = make_ctx(p)
    doubleton_rows(ctx, [0], all_cols(ctx))
    adds = [r for r in ctx.journal.records if isinstance(r, AddScaledEqualityRow)]
    subs = [r for r in ctx.journal.records if isinstance(r, SubstituteSingleton)]
    assert len(adds) == 5
    assert len(subs) == 1
    assert ctx.journal.records.index(subs[0]) > max(
        ctx.journal.records.index(a) for a in adds
    )
    assert not ctx.matrix.col_is_alive(0)
    ctx.stats.verify_against_fresh()


def test_doubleton_infeasible_transfer():
    # x1 + x2 = 10 with both variables in [0,1] cannot hold
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[0.0, 0.0], cl=[0.0, 0.0], cu=[1.0, 1.0], rl=[10.0], ru=[10.0],
    )
    ctx = make_ctx(p)
    run(doubleton_rows, ctx)
    assert ctx.verdict == PresolveStatus.INFEASIBLE_PRIMAL


# --- column singleton in equality ---


def test_free_column_singleton_substituted():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0), (1, 1, 1.0)],
        c=[1.0, 0.0],
        cl=[-INF, 0.0], cu=[INF, INF],
        rl=[1.0, -INF], ru=[1.0, 4.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_equality, ctx)
    assert not ctx.matrix.col_is_alive(0)
    assert not ctx.matrix.row_is_alive(0)


def test_bounded_singleton_failing_implied_free_is_skipped():
    # x0 in [0,1]; row x0 + x1 = 1 with x1 in [0,5] implies x0 in [-4,1]
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0), (1, 1, 1.0)],
        c=[1.0, 0.0],
        cl=[0.0, 0.0], cu=[1.0, 5.0],
        rl=[1.0, -INF], ru=[1.0, 4.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_equality, ctx)
    assert ctx.matrix.col_is_alive(0)
    assert ctx.matrix.row_is_alive(0)


def test_implied_free_bounded_singleton_substituted():
    # x0 in [0,1]; row x0 + x1 = 1 with x1 in [0,0.5] implies x0 in [0.5,1]
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0), (1, 1, 1.0)],
        c=[1.0, 0.0],
        cl=[0.0, 0.0], cu=[1.0, 0.5],
        rl=[1.0, -INF], ru=[1.0, 4.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_equality, ctx)
    assert not ctx.matrix.col_is_alive(0)


def test_tiny_pivot_skipped():
    p = make_problem(
        [(0, 0, 1e-9), (0, 1, 1.0), (1, 1, 1.0)],
        c=[1.0, 0.0],
        cl=[-INF, 0.0], cu=[INF, INF],
        rl=[1.0, -INF], ru=[1.0, 4.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_equality, ctx)
    assert ctx.matrix.col_is_alive(0)


# --- variable locks ---


def lock_problem(c0, cu0):
    # x0 appears once in a >=-row with positive coefficient: downlock only
    return make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[c0, 0.0],
        cl=[0.0, 0.0], cu=[cu0, 10.0],
        rl=[0.0], ru=[INF],
    )


def test_lock_fix_at_upper():
    ctx = make_ctx(lock_problem(-1.0, 3.0))
    run(variable_locks, ctx)
    rec = next(r for r in ctx.journal.records if isinstance(r, FixVariable))
    assert rec.col == 0
    assert rec.value == 3.0
    assert rec.cause == FixingCause.AT_UPPER


def test_lock_unbounded_verdict():
    ctx = make_ctx(lock_problem(-1.0, INF))
    run(variable_locks, ctx)
    assert ctx.verdict == PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL


def test_lock_zero_cost_infinite_bound_skipped():
    ctx = make_ctx(lock_problem(0.0, INF))
    run(variable_locks, ctx)
    assert ctx.verdict is None
    assert ctx.matrix.col_is_alive(0)


def test_lock_zero_cost_fix_requires_strong_dual():
    strong = make_ctx(lock_problem(0.0, 3.0))
    run(variable_locks, strong)
    assert not strong.matrix.col_is_alive(0)

    weak = make_ctx(lock_problem(0.0, 3.0), PresolveConfig(strong_dual=False))
    run(variable_locks, weak)
    assert weak.matrix.col_is_alive(0)


def test_lock_skips_empty_columns():
    # a column in no rows is left alone no matter its cost
    p = make_problem(
        [(0, 1, 1.0)],
        c=[-1.0, 0.0],
        cl=[0.0, 0.0], cu=[3.0, 1.0],
        rl=[0.0], ru=[1.0],
    )
    ctx = make_ctx(p)
    run(variable_locks, ctx)
    assert ctx.matrix.col_is_alive(0)
    assert ctx.verdict is None


def test_lock_collapsed_bounds_fixed_interior():
    p = make_problem(
        [(0, 0, 1.0)], c=[5.0], cl=[2.0], cu=[2.0], rl=[-INF], ru=[10.0]
    )
    ctx = make_ctx(p)
    run(variable_locks, ctx)
    rec = ctx.journal.records[-1]
    assert isinstance(rec, FixVariable)
    assert rec.value == 2.0


# --- column singleton in inequality ---


def test_free_singleton_demands_impossible_dual_sign():
    # z0 = 1 - y >= 1 for every y <= 0, and x0 has no lower bound
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[1.0, 0.0],
        cl=[-INF, 0.0], cu=[INF, 1.0],
        rl=[-INF], ru=[2.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_inequality, ctx)
    assert ctx.verdict == PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL


def test_free_singleton_converts_row_to_equality():
    # z0 = 0 pins y = -1, so the row binds at its upper side
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[-1.0, 0.0],
        cl=[-INF, 0.0], cu=[INF, 1.0],
        rl=[-INF], ru=[2.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_inequality, ctx)
    assert ctx.verdict is None
    assert ctx.is_equality(0)
    assert ctx.row_lower[0] == 2.0
    assert ctx.row_upper[0] == 2.0


def test_forced_zhi_negative_fixes_at_upper():
    # >=-row gives y >= 0; a=1, c=-1: z = -1 - y < 0 always
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[-1.0, 0.0],
        cl=[0.0, 0.0], cu=[4.0, 1.0],
        rl=[0.5], ru=[INF],
    )
    ctx = make_ctx(p)
    run(column_singleton_inequality, ctx)
    rec = next(r for r in ctx.journal.records if isinstance(r, FixVariable))
    assert rec.col == 0
    assert rec.value == 4.0


def test_bounded_singleton_inconclusive_sign_skipped():
    # ranged row: y unrestricted, so z spans both signs; nothing to do
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[1.0, 0.0],
        cl=[0.0, 0.0], cu=[1.0, 1.0],
        rl=[0.0], ru=[5.0],
    )
    ctx = make_ctx(p)
    run(column_singleton_inequality, ctx)
    assert ctx.matrix.col_is_alive(0)
    assert not ctx.is_equality(0)
