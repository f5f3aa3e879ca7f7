#!/usr/bin/env python3
"""Regenerate the bundled benchmark fixtures under tests/data/local_bench/.

The four instances are deterministic synthetic LPs (fixed seeds, forced
feasible), written as MPS. tests/test_bench_corpus.py pins their presolve
results; rerunning this script must reproduce the committed files byte for
byte, so only change the recipes below together with the frozen expectations
in that test.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pslp.mps import write_mps
from pslp.oracle import random_lp

OUT_DIR = Path(__file__).resolve().parents[1] / "tests" / "data" / "local_bench"

RECIPES = {
    "synth_dense_30x24.mps": dict(
        seed=101, num_rows=30, num_cols=24, density=0.45,
        singleton_rows=4, doubleton_rows=3,
        parallel_row_pairs=2, parallel_col_pairs=2,
    ),
    "synth_sparse_60x50.mps": dict(
        seed=202, num_rows=60, num_cols=50, density=0.12,
        singleton_rows=6, doubleton_rows=5,
        parallel_row_pairs=3, parallel_col_pairs=3,
    ),
    "synth_equality_40x40.mps": dict(
        seed=303, num_rows=40, num_cols=40, density=0.25, equality_frac=0.35,
        singleton_rows=8, doubleton_rows=6,
        parallel_row_pairs=4, parallel_col_pairs=2,
    ),
    "synth_wide_20x64.mps": dict(
        seed=404, num_rows=20, num_cols=64, density=0.3, free_var_frac=0.2,
        singleton_rows=3, doubleton_rows=2, parallel_col_pairs=4,
    ),
}


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, recipe in RECIPES.items():
        recipe = dict(recipe)
        seed = recipe.pop("seed")
        num_rows = recipe.pop("num_rows")
        num_cols = recipe.pop("num_cols")
        problem = random_lp(seed, num_rows, num_cols, **recipe)
        data = write_mps(problem)
        path = OUT_DIR / name
        path.write_bytes(data)
        print(f"{name}: {problem.num_rows} rows, {problem.num_cols} cols, "
              f"{problem.matrix.nnz} nnz, {len(data)} bytes")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
