"""Journal replay: solutions of the reduced problem lifted to the original."""

import numpy as np
import pytest

from conftest import INF, make_problem
from pslp.driver import presolve
from pslp.oracle import random_lp, solve_dense
from pslp.postsolve import postsolve
from pslp.problem import (
    PresolveStatus,
    PrimalDualSolution,
    SolutionStatus,
    check_kkt,
    objective_value,
)


def lift(problem, res):
    reduced_sol = solve_dense(res.problem)
    assert reduced_sol.status == SolutionStatus.OPTIMAL
    return postsolve(res.journal, reduced_sol), reduced_sol


def test_empty_journal_is_identity():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0)],
        c=[1.0, 1.0], cl=[0.0, 0.0], cu=[3.0, 3.0],
        rl=[1.0, -2.0], ru=[3.0, 2.0],
    )
    res = presolve(p)
    assert res.status == PresolveStatus.UNCHANGED
    sol = PrimalDualSolution(
        x=np.array([1.0, 0.5]),
        y=np.array([0.25, -0.5]),
        z=np.array([0.0, 0.125]),
        status=SolutionStatus.OPTIMAL,
    )
    out = postsolve(res.journal, sol)
    np.testing.assert_array_equal(out.x, sol.x)
    np.testing.assert_array_equal(out.y, sol.y)
    np.testing.assert_array_equal(out.z, sol.z)


def test_doubleton_chain_recovers_point():
    p = make_problem(
        [(0, 0, 1.0), (0, 1, 1.0)],
        c=[0.0, 1.0], cl=[0.0, 0.0], cu=[INF, INF],
        rl=[1.0], ru=[1.0],
    )
    res = presolve(p)
    assert (res.problem.num_rows, res.problem.num_cols) == (0, 1)
    out, reduced_sol = lift(p, res)
    assert reduced_sol.x[0] == pytest.approx(0.0)
    np.testing.assert_allclose(out.x, [1.0, 0.0], atol=1e-12)
    rep = check_kkt(p, out)
    assert rep.max_residual <= 1e-9
    assert objective_value(p, out.x) == pytest.approx(0.0, abs=1e-12)


def test_random_instances_lift_within_tolerance():
    checked = 0
    for seed in range(80):
        if checked >= 50:
            break
        p = random_lp(seed, 12, 12, density=0.35, singleton_rows=2,
                      doubleton_rows=2, parallel_row_pairs=1,
                      parallel_col_pairs=1)
        res = presolve(p)
        if res.status not in (PresolveStatus.REDUCED, PresolveStatus.UNCHANGED,
                              PresolveStatus.SOLVED_COMPLETELY):
            continue
        if res.status == PresolveStatus.SOLVED_COMPLETELY:
            reduced_sol = PrimalDualSolution(
                x=np.zeros(0), y=np.zeros(0), z=np.zeros(0),
                status=SolutionStatus.OPTIMAL,
            )
        else:
            reduced_sol = solve_dense(res.problem)
            if reduced_sol.status != SolutionStatus.OPTIMAL:
                continue
        out = postsolve(res.journal, reduced_sol)
        rep = check_kkt(p, out)
        assert rep.max_residual <= 1e-6, f"seed {seed}: {rep}"
        direct = solve_dense(p)
        assert direct.status == SolutionStatus.OPTIMAL
        v = objective_value(p, direct.x)
        lifted_v = objective_value(p, out.x)
        assert abs(lifted_v - v) <= 1e-8 * (1.0 + abs(v)), f"seed {seed}"
        checked += 1
    assert checked >= 50


def test_dual_feasibility_on_larger_instances():
    for seed in (0, 1, 2):
        p = random_lp(seed, 25, 25, density=0.2, singleton_rows=3,
                      doubleton_rows=2)
        res = presolve(p)
        if res.problem.num_rows + res.problem.num_cols == 0:
            reduced_sol = PrimalDualSolution(
                x=np.zeros(0), y=np.zeros(0), z=np.zeros(0),
                status=SolutionStatus.OPTIMAL,
            )
        else:
            reduced_sol = solve_dense(res.problem)
            if reduced_sol.status != SolutionStatus.OPTIMAL:
                continue
        out = postsolve(res.journal, reduced_sol)
        rep = check_kkt(p, out)
        assert rep.dual_residual <= 1e-6
        assert rep.complementarity <= 1e-6


def test_replay_is_pure():
    p = random_lp(6, 12, 12, density=0.35, singleton_rows=2, doubleton_rows=2)
    res = presolve(p)
    reduced_sol = solve_dense(res.problem)
    first = postsolve(res.journal, reduced_sol)
    second = postsolve(res.journal, reduced_sol)
    np.testing.assert_array_equal(first.x, second.x)
    np.testing.assert_array_equal(first.y, second.y)
    np.testing.assert_array_equal(first.z, second.z)
    # inputs untouched
    third = solve_dense(res.problem)
    np.testing.assert_array_equal(reduced_sol.x, third.x)


def test_dimension_mismatch_rejected():
    p = make_problem(
        [(0, 0, 2.0)],
        c=[1.0], cl=[0.0], cu=[5.0], rl=[4.0], ru=[4.0],
    )
    res = presolve(p)  # fixes the variable: reduced problem is 0x0
    bad = PrimalDualSolution(
        x=np.array([1.0]), y=np.zeros(0), z=np.array([0.0]),
        status=SolutionStatus.OPTIMAL,
    )
    with pytest.raises(ValueError):
        postsolve(res.journal, bad)
    bad_rows = PrimalDualSolution(
        x=np.zeros(0), y=np.array([2.0]), z=np.zeros(0),
        status=SolutionStatus.OPTIMAL,
    )
    with pytest.raises(ValueError):
        postsolve(res.journal, bad_rows)
