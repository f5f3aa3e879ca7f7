"""Postsolve journal: reduction records and their binary serialization.

Every reduction appends one record holding all data needed to replay that
step in reverse later, without access to either the original or the reduced
problem. Payloads therefore snapshot costs, bounds, sides, and row/column
spans as they were at reduction time.

The serialized form is a versioned little-endian binary stream (one tag byte
per record) so a presolve run and the matching postsolve can happen in
separate processes.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"PSLPJRNL"
FORMAT_VERSION = 1


class JournalIntegrityError(ValueError):
    """Serialized journal is corrupt or references impossible indices."""


class FixingCause(enum.IntEnum):
    AT_LOWER = 0
    AT_UPPER = 1
    INTERIOR = 2
    SINGLETON_ROW = 3


class RemovalCause(enum.IntEnum):
    REDUNDANT = 0
    EMPTY = 1
    PARALLEL = 2
    FORCED_SINGLETON = 3


@dataclass
class RowSnapshot:
    """Full copy of one row (entries plus sides) at reduction time."""

    row: int
    entries: list[tuple[int, float]]
    lower: float
    upper: float


@dataclass
class FixVariable:
    """Column ``col`` was fixed at ``value`` and deleted.

    ``cost``, ``lb``, ``ub`` and ``column`` are the objective coefficient,
    bounds, and column span at fixing time. For cause SINGLETON_ROW,
    ``cause_row``/``cause_coeff`` identify the singleton equality used, so
    postsolve can push a sign-violating reduced cost into that row's dual.
    """

    col: int
    value: float
    cost: float
    lb: float
    ub: float
    cause: FixingCause
    cause_row: int = -1
    cause_coeff: float = 0.0
    column: list[tuple[int, float]] = field(default_factory=list)


@dataclass
class RemoveConstraint:
    """Row ``row`` was deleted.

    For cause PARALLEL, ``kept``/``scale`` name the surviving row with
    row_removed = scale * row_kept, and the *_from_removed flags say which
    side of the kept row's final range came strictly from the removed row
    (postsolve moves the dual there when that side is the binding one).
    """

    row: int
    lower: float
    upper: float
    cause: RemovalCause
    kept: int = -1
    scale: float = 0.0
    lower_from_removed: bool = False
    upper_from_removed: bool = False
    entries: list[tuple[int, float]] = field(default_factory=list)


@dataclass
class AddScaledEqualityRow:
    """Row ``dst`` became dst + scale * src (src an equality row)."""

    src: int
    dst: int
    scale: float


@dataclass
class SubstituteSingleton:
    """Column ``col`` (sole entry ``coeff`` in equality row ``row``) was
    substituted out; ``entries`` is the full row span including ``col``,
    ``cost`` the column's objective coefficient and ``rhs`` the equality
    value, all at substitution time."""

    col: int
    row: int
    coeff: float
    cost: float
    rhs: float
    entries: list[tuple[int, float]] = field(default_factory=list)


@dataclass
class ChangeBounds:
    """Bounds of column ``col`` changed from (old_lb, old_ub).

    ``inducing`` snapshots the row that implied the tightening, enabling the
    dual correction when the postsolved point sits on an implied bound.
    """

    col: int
    old_lb: float
    old_ub: float
    new_lb: float
    new_ub: float
    inducing: RowSnapshot | None = None


@dataclass
class ChangeRowSides:
    """Sides of row ``row`` changed from (old_lower, old_upper).

    Recorded for audit and determinism of the journal; replay is a no-op
    (relaxations only widen the dual sign range, and equality conversions
    are pinned by the dual certificate that justified them).
    """

    row: int
    old_lower: float
    old_upper: float
    new_lower: float
    new_upper: float


@dataclass
class AggregateParallelColumns:
    """Column ``removed`` was merged into ``kept``: col_removed = scale *
    col_kept entrywise, the merged variable w = x_kept + scale * x_removed.
    ``kept_lb``/``kept_ub`` are kept's bounds BEFORE the merge; postsolve
    splits w back into the two coordinates."""

    kept: int
    removed: int
    scale: float
    kept_lb: float
    kept_ub: float
    removed_lb: float
    removed_ub: float
    removed_cost: float


ReductionRecord = (
    FixVariable
    | RemoveConstraint
    | AddScaledEqualityRow
    | SubstituteSingleton
    | ChangeBounds
    | ChangeRowSides
    | AggregateParallelColumns
)

_TAG_FIX = 1
_TAG_REMOVE = 2
_TAG_ADD_SCALED = 3
_TAG_SUBSTITUTE = 4
_TAG_CHANGE_BOUNDS = 5
_TAG_CHANGE_SIDES = 6
_TAG_AGGREGATE = 7


class PostsolveJournal:
    """Append-only record list plus the index maps fixed at finalize time."""

    def __init__(self, original_rows: int, original_cols: int) -> None:
        self.original_rows = original_rows
        self.original_cols = original_cols
        self.records: list[ReductionRecord] = []
        self.reduced_rows = original_rows
        self.reduced_cols = original_cols
        # old index -> new index, -1 for rows/columns absent from the
        # reduced problem; identity until finalize() installs the real maps
        self.row_map = np.arange(original_rows, dtype=np.int32)
        self.col_map = np.arange(original_cols, dtype=np.int32)

    def append(self, record: ReductionRecord) -> None:
        self.records.append(record)

    def finalize(
        self,
        row_map: np.ndarray,
        col_map: np.ndarray,
        reduced_rows: int,
        reduced_cols: int,
    ) -> None:
        self.row_map = np.asarray(row_map, dtype=np.int32)
        self.col_map = np.asarray(col_map, dtype=np.int32)
        self.reduced_rows = reduced_rows
        self.reduced_cols = reduced_cols

    # -- serialization -------------------------------------------------------

    def to_bytes(self) -> bytes:
        out = bytearray()
        out += MAGIC
        out += struct.pack(
            "<HIIII",
            FORMAT_VERSION,
            self.original_rows,
            self.original_cols,
            self.reduced_rows,
            self.reduced_cols,
        )
        out += self.row_map.astype("<i4").tobytes()
        out += self.col_map.astype("<i4").tobytes()
        out += struct.pack("<I", len(self.records))
        for rec in self.records:
            _write_record(out, rec)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PostsolveJournal":
        r = _Reader(data)
        if r.take(len(MAGIC)) != MAGIC:
            raise JournalIntegrityError("bad journal magic")
        version, m, n, rm, rn = r.unpack("<HIIII")
        if version != FORMAT_VERSION:
            raise JournalIntegrityError(f"unsupported journal version {version}")
        journal = cls(m, n)
        journal.reduced_rows = rm
        journal.reduced_cols = rn
        journal.row_map = np.frombuffer(r.take(4 * m), dtype="<i4").astype(np.int32)
        journal.col_map = np.frombuffer(r.take(4 * n), dtype="<i4").astype(np.int32)
        if any(v < -1 or v >= rm for v in journal.row_map):
            raise JournalIntegrityError("row map value out of range")
        if any(v < -1 or v >= rn for v in journal.col_map):
            raise JournalIntegrityError("column map value out of range")
        (count,) = r.unpack("<I")
        for _ in range(count):
            journal.records.append(_read_record(r, m, n))
        if not r.exhausted():
            raise JournalIntegrityError("trailing bytes after last record")
        return journal


def _write_entries(out: bytearray, entries: list[tuple[int, float]]) -> None:
    out += struct.pack("<I", len(entries))
    for idx, val in entries:
        out += struct.pack("<Id", idx, val)


def _write_record(out: bytearray, rec: ReductionRecord) -> None:
    if isinstance(rec, FixVariable):
        out += struct.pack(
            "<BIddddBid",
            _TAG_FIX,
            rec.col,
            rec.value,
            rec.cost,
            rec.lb,
            rec.ub,
            int(rec.cause),
            rec.cause_row,
            rec.cause_coeff,
        )
        _write_entries(out, rec.column)
    elif isinstance(rec, RemoveConstraint):
        flags = (1 if rec.lower_from_removed else 0) | (
            2 if rec.upper_from_removed else 0
        )
        out += struct.pack(
            "<BIddBidB",
            _TAG_REMOVE,
            rec.row,
            rec.lower,
            rec.upper,
            int(rec.cause),
            rec.kept,
            rec.scale,
            flags,
        )
        _write_entries(out, rec.entries)
    elif isinstance(rec, AddScaledEqualityRow):
        out += struct.pack("<BIId", _TAG_ADD_SCALED, rec.src, rec.dst, rec.scale)
    elif isinstance(rec, SubstituteSingleton):
        out += struct.pack(
            "<BIIddd", _TAG_SUBSTITUTE, rec.col, rec.row, rec.coeff, rec.cost, rec.rhs
        )
        _write_entries(out, rec.entries)
    elif isinstance(rec, ChangeBounds):
        out += struct.pack(
            "<BIddddB",
            _TAG_CHANGE_BOUNDS,
            rec.col,
            rec.old_lb,
            rec.old_ub,
            rec.new_lb,
            rec.new_ub,
            0 if rec.inducing is None else 1,
        )
        if rec.inducing is not None:
            out += struct.pack(
                "<Idd", rec.inducing.row, rec.inducing.lower, rec.inducing.upper
            )
            _write_entries(out, rec.inducing.entries)
    elif isinstance(rec, ChangeRowSides):
        out += struct.pack(
            "<BIdddd",
            _TAG_CHANGE_SIDES,
            rec.row,
            rec.old_lower,
            rec.old_upper,
            rec.new_lower,
            rec.new_upper,
        )
    elif isinstance(rec, AggregateParallelColumns):
        out += struct.pack(
            "<BIIdddddd",
            _TAG_AGGREGATE,
            rec.kept,
            rec.removed,
            rec.scale,
            rec.kept_lb,
            rec.kept_ub,
            rec.removed_lb,
            rec.removed_ub,
            rec.removed_cost,
        )
    else:
        raise TypeError(f"unknown record type {type(rec).__name__}")


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise JournalIntegrityError("journal truncated")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def exhausted(self) -> bool:
        return self.pos == len(self.data)


def _read_entries(r: _Reader, limit: int) -> list[tuple[int, float]]:
    (n,) = r.unpack("<I")
    entries = []
    for _ in range(n):
        idx, val = r.unpack("<Id")
        if idx >= limit:
            raise JournalIntegrityError(f"entry index {idx} out of range")
        entries.append((idx, val))
    return entries


def _read_record(r: _Reader, m: int, n: int) -> ReductionRecord:
    (tag,) = r.unpack("<B")
    if tag == _TAG_FIX:
        col, value, cost, lb, ub, cause, cause_row, cause_coeff = r.unpack("<IddddBid")
        if col >= n or cause_row >= m:
            raise JournalIntegrityError("fix record index out of range")
        return FixVariable(
            col,
            value,
            cost,
            lb,
            ub,
            FixingCause(cause),
            cause_row,
            cause_coeff,
            _read_entries(r, m),
        )
    if tag == _TAG_REMOVE:
        row, lower, upper, cause, kept, scale, flags = r.unpack("<IddBidB")
        if row >= m or kept >= m:
            raise JournalIntegrityError("remove record index out of range")
        return RemoveConstraint(
            row,
            lower,
            upper,
            RemovalCause(cause),
            kept,
            scale,
            bool(flags & 1),
            bool(flags & 2),
            _read_entries(r, n),
        )
    if tag == _TAG_ADD_SCALED:
        src, dst, scale = r.unpack("<IId")
        if src >= m or dst >= m:
            raise JournalIntegrityError("row index out of range")
        return AddScaledEqualityRow(src, dst, scale)
    if tag == _TAG_SUBSTITUTE:
        col, row, coeff, cost, rhs = r.unpack("<IIddd")
        if col >= n or row >= m:
            raise JournalIntegrityError("substitute record index out of range")
        return SubstituteSingleton(col, row, coeff, cost, rhs, _read_entries(r, n))
    if tag == _TAG_CHANGE_BOUNDS:
        col, old_lb, old_ub, new_lb, new_ub, has_snapshot = r.unpack("<IddddB")
        if col >= n:
            raise JournalIntegrityError("bound record index out of range")
        inducing = None
        if has_snapshot:
            row, lower, upper = r.unpack("<Idd")
            if row >= m:
                raise JournalIntegrityError("snapshot row out of range")
            inducing = RowSnapshot(row, _read_entries(r, n), lower, upper)
        return ChangeBounds(col, old_lb, old_ub, new_lb, new_ub, inducing)
    if tag == _TAG_CHANGE_SIDES:
        row, a, b, c, d = r.unpack("<Idddd")
        if row >= m:
            raise JournalIntegrityError("side record index out of range")
        return ChangeRowSides(row, a, b, c, d)
    if tag == _TAG_AGGREGATE:
        kept, removed, scale, klb, kub, rlb, rub, rcost = r.unpack("<IIdddddd")
        if kept >= n or removed >= n:
            raise JournalIntegrityError("aggregate record index out of range")
        return AggregateParallelColumns(kept, removed, scale, klb, kub, rlb, rub, rcost)
    raise JournalIntegrityError(f"unknown record tag {tag}")
