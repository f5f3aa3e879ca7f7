"""Dynamic sparse matrix with simultaneous row and column views.

Every entry is stored twice, once in its row span and once in its column
span, so both orientations support O(span) iteration at any time during a
presolve run. Spans are unsorted; deletion swaps the last span element into
the vacated slot. Entries whose magnitude is at most ``ZERO_DROP_TOL`` are
dropped on build and after every arithmetic update. Rows and columns carry
liveness flags instead of being renumbered; :meth:`SparseDualMatrix.compact`
produces the renumbered copy once a presolve run has finished.
"""

from __future__ import annotations

import math

import numpy as np

#: Entries with magnitude at or below this are treated as structural zeros.
ZERO_DROP_TOL = 1e-12


class SparseDualMatrix:
    def __init__(self, num_rows: int, num_cols: int) -> None:
        if num_rows < 0 or num_cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self._row_cols: list[list[int]] = [[] for _ in range(num_rows)]
        self._row_vals: list[list[float]] = [[] for _ in range(num_rows)]
        self._col_rows: list[list[int]] = [[] for _ in range(num_cols)]
        self._col_vals: list[list[float]] = [[] for _ in range(num_cols)]
        self.row_alive: list[bool] = [True] * num_rows
        self.col_alive: list[bool] = [True] * num_cols
        self._nnz = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def build(
        cls,
        num_rows: int,
        num_cols: int,
        entries,
        slack_fraction: float = 0.2,
    ) -> "SparseDualMatrix":
        """Build from ``(row, col, value)`` triplets.

        Duplicate coordinates are summed before the drop-tolerance test.
        ``slack_fraction`` (extra span capacity per row/column) is accepted
        for interface compatibility; Python's list growth already provides
        amortized O(1) appends, so it has no observable effect here.
        """
        if slack_fraction < 0:
            raise ValueError("slack_fraction must be nonnegative")
        mat = cls(num_rows, num_cols)
        sums: dict[tuple[int, int], float] = {}
        for i, k, v in entries:
            i = int(i)
            k = int(k)
            if not (0 <= i < num_rows and 0 <= k < num_cols):
                raise IndexError(f"entry ({i}, {k}) outside {num_rows}x{num_cols}")
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"entry ({i}, {k}) is not finite")
            sums[(i, k)] = sums.get((i, k), 0.0) + v
        for (i, k) in sorted(sums):
            v = sums[(i, k)]
            if abs(v) <= ZERO_DROP_TOL:
                continue
            mat._row_cols[i].append(k)
            mat._row_vals[i].append(v)
            mat._col_rows[k].append(i)
            mat._col_vals[k].append(v)
            mat._nnz += 1
        return mat

    def copy(self) -> "SparseDualMatrix":
        out = SparseDualMatrix(self.num_rows, self.num_cols)
        out._row_cols = [list(s) for s in self._row_cols]
        out._row_vals = [list(s) for s in self._row_vals]
        out._col_rows = [list(s) for s in self._col_rows]
        out._col_vals = [list(s) for s in self._col_vals]
        out.row_alive = list(self.row_alive)
        out.col_alive = list(self.col_alive)
        out._nnz = self._nnz
        return out

    # -- inspection --------------------------------------------------------

    @property
    def num_rows(self) -> int:
        return len(self._row_cols)

    @property
    def num_cols(self) -> int:
        return len(self._col_rows)

    @property
    def nnz(self) -> int:
        return self._nnz

    def row_is_alive(self, i: int) -> bool:
        return self.row_alive[i]

    def col_is_alive(self, k: int) -> bool:
        return self.col_alive[k]

    def live_row_count(self) -> int:
        return sum(self.row_alive)

    def live_col_count(self) -> int:
        return sum(self.col_alive)

    def col_alive_mask(self) -> np.ndarray:
        return np.array(self.col_alive, dtype=bool)

    def row_nnz(self, i: int) -> int:
        return len(self._row_cols[i])

    def col_nnz(self, k: int) -> int:
        return len(self._col_rows[k])

    def row_entries(self, i: int) -> list[tuple[int, float]]:
        """Snapshot of row i as (col, value) pairs, span order."""
        return list(zip(self._row_cols[i], self._row_vals[i]))

    def col_entries(self, k: int) -> list[tuple[int, float]]:
        return list(zip(self._col_rows[k], self._col_vals[k]))

    def get(self, i: int, k: int) -> float:
        try:
            pos = self._row_cols[i].index(k)
        except ValueError:
            return 0.0
        return self._row_vals[i][pos]

    def max_abs_value(self) -> float:
        worst = 0.0
        for i, vals in enumerate(self._row_vals):
            if self.row_alive[i]:
                for v in vals:
                    worst = max(worst, abs(v))
        return worst

    def matvec(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(self.num_rows)
        for i in range(self.num_rows):
            if not self.row_alive[i]:
                continue
            cols = self._row_cols[i]
            vals = self._row_vals[i]
            out[i] = sum(vals[p] * x[cols[p]] for p in range(len(cols)))
        return out

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.num_cols)
        for k in range(self.num_cols):
            if not self.col_alive[k]:
                continue
            rows = self._col_rows[k]
            vals = self._col_vals[k]
            out[k] = sum(vals[p] * y[rows[p]] for p in range(len(rows)))
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.num_rows, self.num_cols))
        for i in range(self.num_rows):
            if not self.row_alive[i]:
                continue
            for k, v in zip(self._row_cols[i], self._row_vals[i]):
                out[i, k] = v
        return out

    # -- mutation ----------------------------------------------------------

    def _require_live(self, i: int, k: int) -> None:
        if not self.row_alive[i]:
            raise ValueError(f"row {i} is deleted")
        if not self.col_alive[k]:
            raise ValueError(f"column {k} is deleted")

    @staticmethod
    def _span_remove(idx: list[int], vals: list[float], pos: int) -> None:
        last = len(idx) - 1
        if pos != last:
            idx[pos] = idx[last]
            vals[pos] = vals[last]
        idx.pop()
        vals.pop()

    def set_value(self, i: int, k: int, value: float) -> None:
        """Insert, overwrite, or (for near-zero values) remove entry (i, k)."""
        self._require_live(i, k)
        value = float(value)
        try:
            pos = self._row_cols[i].index(k)
        except ValueError:
            pos = -1
        if abs(value) <= ZERO_DROP_TOL:
            if pos >= 0:
                self._span_remove(self._row_cols[i], self._row_vals[i], pos)
                cpos = self._col_rows[k].index(i)
                self._span_remove(self._col_rows[k], self._col_vals[k], cpos)
                self._nnz -= 1
            return
        if pos >= 0:
            self._row_vals[i][pos] = value
            cpos = self._col_rows[k].index(i)
            self._col_vals[k][cpos] = value
        else:
            self._row_cols[i].append(k)
            self._row_vals[i].append(value)
            self._col_rows[k].append(i)
            self._col_vals[k].append(value)
            self._nnz += 1

    def delete_row(self, i: int) -> list[tuple[int, float]]:
        """Remove row i entirely; returns its former entries."""
        if not self.row_alive[i]:
            raise ValueError(f"row {i} already deleted")
        removed = self.row_entries(i)
        for k, _ in removed:
            cpos = self._col_rows[k].index(i)
            self._span_remove(self._col_rows[k], self._col_vals[k], cpos)
        self._row_cols[i] = []
        self._row_vals[i] = []
        self.row_alive[i] = False
        self._nnz -= len(removed)
        return removed

    def delete_col(self, k: int) -> list[tuple[int, float]]:
        if not self.col_alive[k]:
            raise ValueError(f"column {k} already deleted")
        removed = self.col_entries(k)
        for i, _ in removed:
            rpos = self._row_cols[i].index(k)
            self._span_remove(self._row_cols[i], self._row_vals[i], rpos)
        self._col_rows[k] = []
        self._col_vals[k] = []
        self.col_alive[k] = False
        self._nnz -= len(removed)
        return removed

    def add_scaled_row(
        self,
        src: int,
        dst: int,
        scale: float,
        cancel_col: int | None = None,
    ) -> list[tuple[int, float, float]]:
        """dst row += scale * src row.

        ``cancel_col`` names a column whose combined value is forced to exact
        zero, shielding an intended cancellation from roundoff residue.
        Returns (col, old, new) for every touched destination entry, where
        ``new`` is the stored value after the drop-tolerance test.
        """
        if src == dst:
            raise ValueError("source and destination rows must differ")
        if not self.row_alive[src]:
            raise ValueError(f"row {src} is deleted")
        if not self.row_alive[dst]:
            raise ValueError(f"row {dst} is deleted")
        changes: list[tuple[int, float, float]] = []
        for k, v in self.row_entries(src):
            old = self.get(dst, k)
            new = 0.0 if k == cancel_col else old + scale * v
            self.set_value(dst, k, new)
            changes.append((k, old, self.get(dst, k)))
        return changes

    def compact(self) -> tuple["SparseDualMatrix", np.ndarray, np.ndarray]:
        """Renumber live rows/columns densely.

        Returns (new_matrix, row_map, col_map) where the maps send old
        indices to new ones, -1 for deleted. Spans of the compacted matrix
        are sorted by index.
        """
        row_map = np.full(self.num_rows, -1, dtype=np.int64)
        col_map = np.full(self.num_cols, -1, dtype=np.int64)
        nxt = 0
        for i in range(self.num_rows):
            if self.row_alive[i]:
                row_map[i] = nxt
                nxt += 1
        nxt = 0
        for k in range(self.num_cols):
            if self.col_alive[k]:
                col_map[k] = nxt
                nxt += 1
        entries = []
        for i in range(self.num_rows):
            if not self.row_alive[i]:
                continue
            for k, v in sorted(self.row_entries(i)):
                entries.append((int(row_map[i]), int(col_map[k]), v))
        new = SparseDualMatrix.build(
            int(sum(self.row_alive)), int(sum(self.col_alive)), entries
        )
        return new, row_map, col_map

    # -- verification -------------------------------------------------------

    def check_consistency(self) -> None:
        """Verify the two views mirror each other exactly; raises on defect."""
        count = 0
        for i in range(self.num_rows):
            cols = self._row_cols[i]
            if not self.row_alive[i] and cols:
                raise AssertionError(f"dead row {i} still has entries")
            if len(set(cols)) != len(cols):
                raise AssertionError(f"row {i} has duplicate column indices")
            for k, v in zip(cols, self._row_vals[i]):
                if abs(v) <= ZERO_DROP_TOL:
                    raise AssertionError(f"row {i} stores dropped-size value at col {k}")
                if not self.col_alive[k]:
                    raise AssertionError(f"row {i} references dead column {k}")
                try:
                    pos = self._col_rows[k].index(i)
                except ValueError:
                    raise AssertionError(f"entry ({i}, {k}) missing from column view")
                if self._col_vals[k][pos] != v:
                    raise AssertionError(f"entry ({i}, {k}) differs between views")
                count += 1
        col_count = 0
        for k in range(self.num_cols):
            rows = self._col_rows[k]
            if not self.col_alive[k] and rows:
                raise AssertionError(f"dead column {k} still has entries")
            if len(set(rows)) != len(rows):
                raise AssertionError(f"column {k} has duplicate row indices")
            for i in rows:
                if not self.row_alive[i]:
                    raise AssertionError(f"column {k} references dead row {i}")
                if k not in self._row_cols[i]:
                    raise AssertionError(f"entry ({i}, {k}) missing from row view")
            col_count += len(rows)
        if count != self._nnz or col_count != self._nnz:
            raise AssertionError(
                f"nnz counter {self._nnz} disagrees with spans ({count}, {col_count})"
            )
