"""Regression pins for the bundled synthetic benchmark instances.

The four MPS files under tests/data/local_bench/ are deterministic synthetic
LPs regenerated byte-for-byte by scripts/make_bench_fixtures.py. Presolve is
deterministic, so the post-reduction sizes are frozen here as exact integers;
a change in any explorer that alters reduction power shows up as a count
mismatch, not a flaky ratio drift.
"""

import time
from pathlib import Path

import pytest

from pslp.driver import presolve, PresolveStatus
from pslp.mps import read_mps
from pslp.oracle import solve_dense
from pslp.postsolve import postsolve
from pslp.problem import check_kkt

BENCH_DIR = Path(__file__).parent / "data" / "local_bench"

# name -> ((rows, cols, nnz) before, (rows, cols, nnz) after)
FROZEN = {
    "synth_dense_30x24.mps": ((30, 24, 250), (21, 18, 189)),
    "synth_sparse_60x50.mps": ((60, 50, 295), (43, 41, 236)),
    "synth_equality_40x40.mps": ((40, 40, 262), (22, 28, 166)),
    "synth_wide_20x64.mps": ((20, 64, 311), (15, 56, 281)),
}

# Generous wall-clock ceiling for presolving all four (measured ~40ms).
TIME_BUDGET = 0.5


def load(name):
    return read_mps((BENCH_DIR / name).read_bytes())


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_reduction_counts(name):
    before, after = FROZEN[name]
    problem = load(name)
    assert (problem.num_rows, problem.num_cols, problem.matrix.nnz) == before

    result = presolve(problem)
    reduced = result.problem
    assert result.status == PresolveStatus.REDUCED
    assert (reduced.num_rows, reduced.num_cols, reduced.matrix.nnz) == after


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_roundtrip_on_fixture(name):
    problem = load(name)
    result = presolve(problem)
    # Reduced sizes exceed the default oracle cap on two fixtures; these are
    # still small enough for the reference solver, so raise the cap locally.
    solution = solve_dense(result.problem, size_cap=120)
    lifted = postsolve(result.journal, solution)
    report = check_kkt(load(name), lifted)
    assert report.max_residual <= 1e-6


def test_corpus_presolve_time_and_mean_ratio():
    ratios = []
    elapsed = 0.0
    for name in FROZEN:
        problem = load(name)
        start = time.perf_counter()
        result = presolve(problem)
        elapsed += time.perf_counter() - start
        ratios.append(result.report.nnz_after / result.report.nnz_before)
    assert elapsed < TIME_BUDGET
    assert sum(ratios) / len(ratios) <= 0.80


def test_fixtures_match_generator_recipes():
    # The committed files must be exactly what the generator script produces.
    import importlib.util
    import sys

    script = Path(__file__).parent.parent / "scripts" / "make_bench_fixtures.py"
    spec = importlib.util.spec_from_file_location("make_bench_fixtures", script)
    mod = importlib.util.module_from_spec(spec)
    sys.modules[spec.name] = mod
    spec.loader.exec_module(mod)

    from pslp.mps import write_mps
    from pslp.oracle import random_lp

    assert sorted(mod.RECIPES) == sorted(FROZEN)
    for name, recipe in mod.RECIPES.items():
        recipe = dict(recipe)
        seed = recipe.pop("seed")
        rows = recipe.pop("num_rows")
        cols = recipe.pop("num_cols")
        regenerated = write_mps(random_lp(seed, rows, cols, **recipe))
        assert regenerated == (BENCH_DIR / name).read_bytes(), name
