"""Incrementally maintained problem statistics.

Tracks, per row: nonzero count and minimum/maximum activity (the smallest
and largest value the row's linear expression can take under the current
variable bounds), stored as a finite sum plus a counter of infinite
contributions. Tracks, per column: nonzero count and up/down locks (the
number of alive rows whose finite side blocks the variable from moving up
or down).

All state is updated in O(changed span) through the three hooks below; the
reduction engine calls them alongside every matrix/bound/side mutation.
Because activity sums accumulate float error, each row is refreshed from
scratch after REFRESH_INTERVAL incremental updates, and
``verify_against_fresh`` can assert agreement at any point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sparse import SparseDualMatrix

INF = math.inf

#: Refresh a row's activity from scratch after this many incremental updates.
REFRESH_INTERVAL = 1 << 20

#: Allowed relative drift between incremental and fresh activities.
ACTIVITY_REFRESH_TOL = 1e-9


@dataclass
class RowActivity:
    min_finite: float
    num_inf_min: int
    max_finite: float
    num_inf_max: int

    @property
    def min_value(self) -> float:
        return -INF if self.num_inf_min > 0 else self.min_finite

    @property
    def max_value(self) -> float:
        return INF if self.num_inf_max > 0 else self.max_finite


def _min_contribution(a: float, lb: float, ub: float) -> float:
    return a * lb if a > 0 else a * ub


def _max_contribution(a: float, lb: float, ub: float) -> float:
    return a * ub if a > 0 else a * lb


class StatsTracker:
    """Live statistics for a problem undergoing reductions.

    Holds references to the matrix and the four bound/side arrays; those are
    owned and mutated by the caller, which must report every change through
    on_bound_change / on_entry_change / on_row_sides_change with the old and
    new values passed explicitly (hooks are called after the mutation).
    """

    def __init__(
        self,
        matrix: SparseDualMatrix,
        col_lower: np.ndarray,
        col_upper: np.ndarray,
        row_lower: np.ndarray,
        row_upper: np.ndarray,
    ) -> None:
        self.matrix = matrix
        self.col_lower = col_lower
        self.col_upper = col_upper
        self.row_lower = row_lower
        self.row_upper = row_upper

        m, n = matrix.num_rows, matrix.num_cols
        self.row_nnz = [0] * m
        self.col_nnz = [0] * n
        self.uplocks = [0] * n
        self.downlocks = [0] * n
        self._min_sum = [0.0] * m
        self._min_inf = [0] * m
        self._max_sum = [0.0] * m
        self._max_inf = [0] * m
        self._updates = [0] * m
        self.full_refresh()

    # -- queries -----------------------------------------------------------

    def row_activity(self, i: int) -> RowActivity:
        return RowActivity(
            self._min_sum[i], self._min_inf[i], self._max_sum[i], self._max_inf[i]
        )

    def minact(self, i: int) -> float:
        return -INF if self._min_inf[i] > 0 else self._min_sum[i]

    def maxact(self, i: int) -> float:
        return INF if self._max_inf[i] > 0 else self._max_sum[i]

    def residual_min(self, i: int, k: int, a: float) -> float:
        """Min activity of row i with column k's contribution removed."""
        c = _min_contribution(a, self.col_lower[k], self.col_upper[k])
        if math.isinf(c):
            remaining = self._min_inf[i] - 1
            finite = self._min_sum[i]
        else:
            remaining = self._min_inf[i]
            finite = self._min_sum[i] - c
        return -INF if remaining > 0 else finite

    def residual_max(self, i: int, k: int, a: float) -> float:
        c = _max_contribution(a, self.col_lower[k], self.col_upper[k])
        if math.isinf(c):
            remaining = self._max_inf[i] - 1
            finite = self._max_sum[i]
        else:
            remaining = self._max_inf[i]
            finite = self._max_sum[i] - c
        return INF if remaining > 0 else finite

    # -- activity bookkeeping ----------------------------------------------

    def _activity_add(self, i: int, a: float, lb: float, ub: float, sign: int) -> None:
        """Add (sign=+1) or remove (sign=-1) one entry's activity contribution."""
        c = _min_contribution(a, lb, ub)
        if math.isinf(c):
            self._min_inf[i] += sign
        else:
            self._min_sum[i] += sign * c
        c = _max_contribution(a, lb, ub)
        if math.isinf(c):
            self._max_inf[i] += sign
        else:
            self._max_sum[i] += sign * c

    def _after_activity_update(self, i: int) -> None:
        if self.row_nnz[i] == 0:
            # exact reset keeps empty rows at (0, 0) with no float residue
            self._min_sum[i] = 0.0
            self._max_sum[i] = 0.0
            self._min_inf[i] = 0
            self._max_inf[i] = 0
            self._updates[i] = 0
            return
        self._updates[i] += 1
        if self._updates[i] >= REFRESH_INTERVAL:
            self.refresh_row(i)

    # -- hooks --------------------------------------------------------------

    def on_bound_change(
        self, k: int, old_lb: float, old_ub: float, new_lb: float, new_ub: float
    ) -> list[int]:
        """Bounds of column k changed; returns the rows whose activity moved."""
        touched = []
        for i, a in self.matrix.col_entries(k):
            self._activity_add(i, a, old_lb, old_ub, -1)
            self._activity_add(i, a, new_lb, new_ub, +1)
            self._after_activity_update(i)
            touched.append(i)
        return touched

    def on_entry_change(self, i: int, k: int, old: float, new: float) -> None:
        """Entry (i, k) changed from old to new (0.0 meaning absent)."""
        if old == new:
            return
        lb = self.col_lower[k]
        ub = self.col_upper[k]
        bl = self.row_lower[i]
        bu = self.row_upper[i]
        if old != 0.0:
            self.row_nnz[i] -= 1
            self.col_nnz[k] -= 1
            if (old > 0 and bu < INF) or (old < 0 and bl > -INF):
                self.uplocks[k] -= 1
            if (old > 0 and bl > -INF) or (old < 0 and bu < INF):
                self.downlocks[k] -= 1
            self._activity_add(i, old, lb, ub, -1)
        if new != 0.0:
            self.row_nnz[i] += 1
            self.col_nnz[k] += 1
            if (new > 0 and bu < INF) or (new < 0 and bl > -INF):
                self.uplocks[k] += 1
            if (new > 0 and bl > -INF) or (new < 0 and bu < INF):
                self.downlocks[k] += 1
            self._activity_add(i, new, lb, ub, +1)
        self._after_activity_update(i)

    def on_row_sides_change(
        self, i: int, old_bl: float, old_bu: float, new_bl: float, new_bu: float
    ) -> None:
        """Sides of row i changed; only the locks depend on sidedness."""
        for k, a in self.matrix.row_entries(i):
            was_up = (a > 0 and old_bu < INF) or (a < 0 and old_bl > -INF)
            now_up = (a > 0 and new_bu < INF) or (a < 0 and new_bl > -INF)
            if was_up != now_up:
                self.uplocks[k] += 1 if now_up else -1
            was_down = (a > 0 and old_bl > -INF) or (a < 0 and old_bu < INF)
            now_down = (a > 0 and new_bl > -INF) or (a < 0 and new_bu < INF)
            if was_down != now_down:
                self.downlocks[k] += 1 if now_down else -1

    # -- refresh ------------------------------------------------------------

    def refresh_row(self, i: int) -> None:
        min_sum = 0.0
        min_inf = 0
        max_sum = 0.0
        max_inf = 0
        for k, a in self.matrix.row_entries(i):
            c = _min_contribution(a, self.col_lower[k], self.col_upper[k])
            if math.isinf(c):
                min_inf += 1
            else:
                min_sum += c
            c = _max_contribution(a, self.col_lower[k], self.col_upper[k])
            if math.isinf(c):
                max_inf += 1
            else:
                max_sum += c
        self._min_sum[i] = min_sum
        self._min_inf[i] = min_inf
        self._max_sum[i] = max_sum
        self._max_inf[i] = max_inf
        self._updates[i] = 0

    def full_refresh(self) -> None:
        m = self.matrix.num_rows
        n = self.matrix.num_cols
        self.row_nnz = [0] * m
        self.col_nnz = [0] * n
        self.uplocks = [0] * n
        self.downlocks = [0] * n
        for i in range(m):
            if not self.matrix.row_is_alive(i):
                self._min_sum[i] = 0.0
                self._max_sum[i] = 0.0
                self._min_inf[i] = 0
                self._max_inf[i] = 0
                continue
            self.row_nnz[i] = self.matrix.row_nnz(i)
            bl = self.row_lower[i]
            bu = self.row_upper[i]
            for k, a in self.matrix.row_entries(i):
                self.col_nnz[k] += 1
                if (a > 0 and bu < INF) or (a < 0 and bl > -INF):
                    self.uplocks[k] += 1
                if (a > 0 and bl > -INF) or (a < 0 and bu < INF):
                    self.downlocks[k] += 1
            self.refresh_row(i)

    def verify_against_fresh(self) -> None:
        """Assert the incremental state matches a from-scratch recomputation.

        Counts and locks must match exactly; activity sums within
        ACTIVITY_REFRESH_TOL relative to 1 + |finite part|.
        """
        fresh = StatsTracker(
            self.matrix, self.col_lower, self.col_upper, self.row_lower, self.row_upper
        )
        if fresh.row_nnz != self.row_nnz:
            raise AssertionError("row nonzero counts drifted")
        if fresh.col_nnz != self.col_nnz:
            raise AssertionError("column nonzero counts drifted")
        if fresh.uplocks != self.uplocks:
            raise AssertionError("uplocks drifted")
        if fresh.downlocks != self.downlocks:
            raise AssertionError("downlocks drifted")
        if fresh._min_inf != self._min_inf or fresh._max_inf != self._max_inf:
            raise AssertionError("infinite-contribution counters drifted")
        for i in range(self.matrix.num_rows):
            if not self.matrix.row_is_alive(i):
                continue
            for inc, ref in (
                (self._min_sum[i], fresh._min_sum[i]),
                (self._max_sum[i], fresh._max_sum[i]),
            ):
                if abs(inc - ref) > ACTIVITY_REFRESH_TOL * (1.0 + abs(ref)):
                    raise AssertionError(
                        f"activity of row {i} drifted: {inc} vs fresh {ref}"
                    )
