"""Problem container and optimality checking for linear programs.

The canonical form used throughout the package is

    minimize    c @ x + offset
    subject to  row_lower <= A @ x <= row_upper
                col_lower <=   x  <= col_upper

where any side or bound may be infinite and an equality constraint is a row
with ``row_lower == row_upper``. Optimality is certified by the usual
first-order conditions: primal feasibility, dual feasibility
``c - A.T @ y - z == 0``, and the sign/complementarity rules

    z_k > 0  requires  x_k at col_lower[k]
    z_k < 0  requires  x_k at col_upper[k]
    y_i > 0  requires  (A @ x)_i at row_lower[i]
    y_i < 0  requires  (A @ x)_i at row_upper[i]

with the matching sign restrictions when a bound or side is infinite
(a free variable forces z_k == 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .sparse import SparseDualMatrix

INF = math.inf

#: Magnitudes at or above this threshold are treated as infinite on input.
INF_THRESHOLD = 1e20

#: Absolute tolerance for feasibility and bound/side comparisons.
FEAS_TOL = 1e-9

#: Default tolerance accepted by :func:`check_kkt`.
KKT_DEFAULT_TOL = 1e-6


class SolutionStatus(Enum):
    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE_OR_UNBOUNDED = "dual_infeasible_or_unbounded"
    UNKNOWN = "unknown"


class PresolveStatus(Enum):
    REDUCED = "reduced"
    UNCHANGED = "unchanged"
    SOLVED_COMPLETELY = "solved_completely"
    INFEASIBLE_PRIMAL = "infeasible_primal"
    UNBOUNDED_OR_INFEASIBLE_DUAL = "unbounded_or_infeasible_dual"


def _as_float_array(values, length: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1).copy()
    if arr.shape[0] != length:
        raise ValueError(f"{what} has length {arr.shape[0]}, expected {length}")
    # Normalize huge magnitudes to true infinities.
    arr[arr >= INF_THRESHOLD] = INF
    arr[arr <= -INF_THRESHOLD] = -INF
    return arr


class LpProblem:
    """A linear program in canonical two-sided form.

    The matrix is shared, not copied; use :meth:`copy` before mutating a
    problem that must also survive unchanged.
    """

    def __init__(
        self,
        c,
        col_lower,
        col_upper,
        row_lower,
        row_upper,
        matrix: SparseDualMatrix,
        *,
        offset: float = 0.0,
        name: str = "",
        objective_name: str = "OBJ",
        row_names: list[str] | None = None,
        col_names: list[str] | None = None,
    ) -> None:
        m = matrix.num_rows
        n = matrix.num_cols
        self.matrix = matrix
        self.c = _as_float_array(c, n, "c")
        self.col_lower = _as_float_array(col_lower, n, "col_lower")
        self.col_upper = _as_float_array(col_upper, n, "col_upper")
        self.row_lower = _as_float_array(row_lower, m, "row_lower")
        self.row_upper = _as_float_array(row_upper, m, "row_upper")
        self.offset = float(offset)
        self.name = name
        self.objective_name = objective_name
        self.row_names = list(row_names) if row_names is not None else [f"R{i}" for i in range(m)]
        self.col_names = list(col_names) if col_names is not None else [f"C{j}" for j in range(n)]
        if len(self.row_names) != m:
            raise ValueError("row_names length mismatch")
        if len(self.col_names) != n:
            raise ValueError("col_names length mismatch")

    @classmethod
    def from_entries(
        cls,
        num_rows: int,
        num_cols: int,
        entries,
        c,
        col_lower,
        col_upper,
        row_lower,
        row_upper,
        **kwargs,
    ) -> "LpProblem":
        matrix = SparseDualMatrix.build(num_rows, num_cols, entries)
        return cls(c, col_lower, col_upper, row_lower, row_upper, matrix, **kwargs)

    @property
    def num_rows(self) -> int:
        return self.matrix.num_rows

    @property
    def num_cols(self) -> int:
        return self.matrix.num_cols

    def copy(self) -> "LpProblem":
        return LpProblem(
            self.c,
            self.col_lower,
            self.col_upper,
            self.row_lower,
            self.row_upper,
            self.matrix.copy(),
            offset=self.offset,
            name=self.name,
            objective_name=self.objective_name,
            row_names=self.row_names,
            col_names=self.col_names,
        )

    def activities(self, x: np.ndarray) -> np.ndarray:
        return self.matrix.matvec(x)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"LpProblem(name={self.name!r}, rows={self.num_rows}, "
            f"cols={self.num_cols}, nnz={self.matrix.nnz})"
        )


@dataclass
class PrimalDualSolution:
    """Primal values with row duals ``y`` and reduced costs ``z``."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    status: SolutionStatus = SolutionStatus.OPTIMAL

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float).copy()
        self.y = np.asarray(self.y, dtype=float).copy()
        self.z = np.asarray(self.z, dtype=float).copy()

    def copy(self) -> "PrimalDualSolution":
        return PrimalDualSolution(self.x, self.y, self.z, self.status)


def objective_value(problem: LpProblem, x: np.ndarray) -> float:
    return float(np.dot(problem.c, x) + problem.offset)


@dataclass
class KktReport:
    """Worst-case optimality residuals, absolute and relative to problem scale.

    ``scale`` is one plus the largest finite datum magnitude in the problem.
    Sign violations against an infinite bound or side (for example z_k > 0 on
    a variable with no lower bound) are reported as the multiplier magnitude.
    """

    primal_residual: float
    bound_violation: float
    dual_residual: float
    complementarity: float
    scale: float = 1.0

    @property
    def max_residual(self) -> float:
        return max(
            self.primal_residual,
            self.bound_violation,
            self.dual_residual,
            self.complementarity,
        )

    @property
    def rel_primal_residual(self) -> float:
        return self.primal_residual / self.scale

    @property
    def rel_bound_violation(self) -> float:
        return self.bound_violation / self.scale

    @property
    def rel_dual_residual(self) -> float:
        return self.dual_residual / self.scale

    @property
    def rel_complementarity(self) -> float:
        return self.complementarity / self.scale

    def passed(self, tol: float = KKT_DEFAULT_TOL) -> bool:
        return bool(self.max_residual <= tol)


def _problem_scale(problem: LpProblem) -> float:
    worst = 0.0
    for arr in (
        problem.c,
        problem.col_lower,
        problem.col_upper,
        problem.row_lower,
        problem.row_upper,
    ):
        finite = arr[np.isfinite(arr)]
        if finite.size:
            worst = max(worst, float(np.max(np.abs(finite))))
    worst = max(worst, problem.matrix.max_abs_value())
    return 1.0 + worst


def check_kkt(
    problem: LpProblem,
    solution: PrimalDualSolution,
    tol: float = KKT_DEFAULT_TOL,
) -> KktReport:
    """Measure how far ``solution`` is from satisfying the optimality system.

    ``tol`` only classifies which multipliers count as active for the
    complementarity products; all residuals are reported unconditionally.
    """
    m, n = problem.num_rows, problem.num_cols
    x, y, z = solution.x, solution.y, solution.z
    if x.shape[0] != n or z.shape[0] != n or y.shape[0] != m:
        raise ValueError("solution dimensions do not match the problem")

    act = problem.matrix.matvec(x)

    primal = 0.0
    comp = 0.0
    for i in range(m):
        if not problem.matrix.row_is_alive(i):
            continue
        lo, hi = problem.row_lower[i], problem.row_upper[i]
        if lo > -INF:
            primal = max(primal, lo - act[i])
        if hi < INF:
            primal = max(primal, act[i] - hi)
        yi = y[i]
        if yi > tol:
            comp = max(comp, abs(yi * (act[i] - lo)) if lo > -INF else abs(yi))
        elif yi < -tol:
            comp = max(comp, abs(yi * (act[i] - hi)) if hi < INF else abs(yi))

    bound = 0.0
    for k in range(n):
        if not problem.matrix.col_is_alive(k):
            continue
        lo, hi = problem.col_lower[k], problem.col_upper[k]
        if lo > -INF:
            bound = max(bound, lo - x[k])
        if hi < INF:
            bound = max(bound, x[k] - hi)
        zk = z[k]
        if zk > tol:
            comp = max(comp, abs(zk * (x[k] - lo)) if lo > -INF else abs(zk))
        elif zk < -tol:
            comp = max(comp, abs(zk * (x[k] - hi)) if hi < INF else abs(zk))

    dual_gap = problem.c - problem.matrix.rmatvec(y) - z
    alive_cols = problem.matrix.col_alive_mask()
    dual = float(np.max(np.abs(dual_gap[alive_cols]))) if alive_cols.any() else 0.0

    return KktReport(
        primal_residual=max(primal, 0.0),
        bound_violation=max(bound, 0.0),
        dual_residual=dual,
        complementarity=comp,
        scale=_problem_scale(problem),
    )
