"""Problem model, KKT checker, and objective evaluation."""

import numpy as np
import pytest

from conftest import INF, make_problem
from pslp.problem import (
    INF_THRESHOLD,
    KktReport,
    LpProblem,
    PrimalDualSolution,
    SolutionStatus,
    check_kkt,
    objective_value,
)


def test_dimensions_and_names():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 2.0)],
        c=[1.0, 1.0],
        cl=[0.0, 0.0],
        cu=[1.0, 1.0],
        rl=[-INF],
        ru=[4.0],
    )
    assert p.num_rows == 1
    assert p.num_cols == 2
    assert p.row_names == ["R0"]
    assert p.col_names == ["C0", "C1"]


def test_large_magnitudes_normalize_to_infinity():
    p = make_problem(
        [(0, 0, 1.0)],
        c=[0.0],
        cl=[-1e20],
        cu=[5e21],
        rl=[-2e20],
        ru=[3.0],
    )
    assert p.col_lower[0] == -INF
    assert p.col_upper[0] == INF
    assert p.row_lower[0] == -INF
    assert np.isfinite(INF_THRESHOLD)


def test_copy_is_deep():
    p = make_problem(
        [(0, 0, 1.0)], c=[1.0], cl=[0.0], cu=[1.0], rl=[0.0], ru=[1.0]
    )
    q = p.copy()
    q.c[0] = 99.0
    q.matrix.set_value(0, 0, 7.0)
    assert p.c[0] == 1.0
    assert p.matrix.get(0, 0) == 1.0


def test_activities():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 2.0), (1, 1, -1.0)],
        c=[0.0, 0.0],
        cl=[0.0, 0.0],
        cu=[INF, INF],
        rl=[-INF, -INF],
        ru=[INF, INF],
    )
    acts = p.activities(np.array([3.0, 4.0]))
    assert acts == pytest.approx([11.0, -4.0])


def test_kkt_one_variable_at_lower():
    # min x, 0 <= x <= 1: x=0 with z=1 is optimal and exactly complementary
    p = make_problem([], c=[1.0], cl=[0.0], cu=[1.0], rl=[], ru=[])
    sol = PrimalDualSolution(np.array([0.0]), np.zeros(0), np.array([1.0]))
    rep = check_kkt(p, sol)
    assert rep.max_residual == 0.0
    assert rep.passed(1e-9)


def test_kkt_two_variable_instance_exact():
    # min x1+x2 s.t. x1+2x2 >= 5, x1 >= 1, x2 >= 2; (1,2) with y=0, z=(1,1)
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 2.0)],
        c=[1.0, 1.0],
        cl=[1.0, 2.0],
        cu=[INF, INF],
        rl=[5.0],
        ru=[INF],
    )
    sol = PrimalDualSolution(
        np.array([1.0, 2.0]), np.array([0.0]), np.array([1.0, 1.0])
    )
    rep = check_kkt(p, sol)
    assert rep.max_residual == 0.0


def test_kkt_reports_bound_violation():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 2.0)],
        c=[1.0, 1.0],
        cl=[1.0, 2.0],
        cu=[INF, INF],
        rl=[5.0],
        ru=[INF],
    )
    sol = PrimalDualSolution(
        np.array([0.0, 2.0]), np.array([0.0]), np.array([0.0, 0.0])
    )
    rep = check_kkt(p, sol)
    assert rep.bound_violation == pytest.approx(1.0)


def test_kkt_no_constraints_dual_residual_is_c_minus_z():
    p = make_problem([], c=[3.0, -2.0], cl=[0.0, 0.0], cu=[1.0, 1.0], rl=[], ru=[])
    sol = PrimalDualSolution(np.zeros(2), np.zeros(0), np.zeros(2))
    rep = check_kkt(p, sol)
    assert rep.dual_residual == pytest.approx(3.0)


def test_kkt_permutation_invariance(rng):
    entries = [(0, 0, 2.0), (0, 1, -1.0), (1, 1, 3.0), (1, 2, 1.0)]
    p = make_problem(
        entries,
        c=[1.0, 0.5, -1.0],
        cl=[0.0, -1.0, 0.0],
        cu=[2.0, 1.0, 4.0],
        rl=[-1.0, 0.0],
        ru=[3.0, 5.0],
    )
    x = np.array([0.5, 0.25, 1.0])
    y = np.array([0.125, -0.25])
    z = p.c - p.matrix.to_dense().T @ y
    sol = PrimalDualSolution(x, y, z)
    base = check_kkt(p, sol)

    rp = rng.permutation(2)
    cp = rng.permutation(3)
    perm_entries = []
    inv_r = np.argsort(rp)
    inv_c = np.argsort(cp)
    for i, k, v in entries:
        perm_entries.append((int(inv_r[i]), int(inv_c[k]), v))
    q = make_problem(
        perm_entries,
        c=list(np.asarray(p.c)[cp]),
        cl=list(p.col_lower[cp]),
        cu=list(p.col_upper[cp]),
        rl=list(p.row_lower[rp]),
        ru=list(p.row_upper[rp]),
    )
    sol_q = PrimalDualSolution(x[cp], y[rp], z[cp])
    perm = check_kkt(q, sol_q)
    assert perm.max_residual == pytest.approx(base.max_residual, abs=1e-14)


def test_kkt_dimension_mismatch():
    p = make_problem([], c=[1.0], cl=[0.0], cu=[1.0], rl=[], ru=[])
    sol = PrimalDualSolution(np.zeros(2), np.zeros(0), np.zeros(2))
    with pytest.raises(ValueError):
        check_kkt(p, sol)


def test_objective_value_simple():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 2.0)],
        c=[1.0, 1.0],
        cl=[1.0, 2.0],
        cu=[INF, INF],
        rl=[5.0],
        ru=[INF],
    )
    assert objective_value(p, np.array([1.0, 2.0])) == pytest.approx(3.0)


def test_objective_value_empty_problem_carries_offset():
    p = LpProblem.from_entries(
        0, 0, [], c=[], col_lower=[], col_upper=[], row_lower=[], row_upper=[],
        offset=7.5,
    )
    assert objective_value(p, np.zeros(0)) == 7.5


def test_objective_value_with_offset():
    p = make_problem(
        [], c=[2.0, -1.0], cl=[0.0, 0.0], cu=[1.0, 1.0], rl=[], ru=[], num_rows=0
    )
    p.offset = 1.0
    assert objective_value(p, np.array([0.5, 1.0])) == pytest.approx(1.0)


def test_kkt_report_scale_and_relative_accessors():
    rep = KktReport(1e-7, 0.0, 2e-7, 0.0, scale=10.0)
    assert rep.max_residual == 2e-7
    assert rep.passed(1e-6)
    assert not rep.passed(1e-8)


def test_solution_status_round_trip():
    for status in SolutionStatus:
        assert SolutionStatus(status.value) is status


def test_solution_copy_detaches_arrays():
    sol = PrimalDualSolution(np.array([1.0]), np.zeros(0), np.array([0.0]))
    dup = sol.copy()
    dup.x[0] = 5.0
    assert sol.x[0] == 1.0
