"""MPS format reader and writer.

Free (whitespace-delimited) layout by default; the strict fixed-column
layout is available behind a flag. Gzip input is detected by magic bytes.

Conventions implemented:

* row types: N (objective / free row), L, G, E;
* RANGES: L gives [rhs - |r|, rhs], G gives [rhs, rhs + |r|], E gives
  [rhs, rhs + r] for r >= 0 and [rhs + r, rhs] for r < 0;
* BOUNDS: LO, UP, FX, FR, MI, PL; integer bound types are rejected;
* default variable bounds [0, +inf); an UP bound never touches the lower
  bound, even when negative (the historic quirk is deliberately absent);
* a RHS entry on the objective row encodes the negated objective constant;
* OBJSENSE MAXIMIZE is folded in by negating the objective and constant,
  so problems are always minimization internally.

Integer markers (MARKER INTORG) raise: this is an LP-only reader.
"""

from __future__ import annotations

import gzip
import math

from .problem import LpProblem

INF = math.inf

_SECTIONS = {"NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"}

# 1-indexed inclusive column spans of the six fixed-format fields.
_FIXED_FIELDS = ((2, 3), (5, 12), (15, 22), (25, 36), (40, 47), (50, 61))


class MpsParseError(ValueError):
    """Malformed MPS input; message carries the 1-based line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _tokenize(line: str, fixed: bool) -> list[str]:
    if not fixed:
        return line.split()
    fields = []
    for start, end in _FIXED_FIELDS:
        piece = line[start - 1 : end].strip()
        if piece:
            fields.append(piece)
    return fields


def _parse_value(token: str, line_no: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise MpsParseError(line_no, f"bad numeric value {token!r}") from None


def read_mps(source, *, fixed: bool = False) -> LpProblem:
    """Parse MPS data from bytes or a binary file object."""
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = bytes(source)
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    text = data.decode("latin-1")

    name = ""
    objective_name = ""
    maximize = False
    expect_objsense_value = False
    row_names: list[str] = []
    row_index: dict[str, int] = {}
    row_type: dict[str, str] = {}
    col_names: list[str] = []
    col_index: dict[str, int] = {}
    c_by_col: dict[int, float] = {}
    entries: list[tuple[int, int, float]] = []
    rhs: dict[int, float] = {}
    ranges: dict[int, float] = {}
    offset = 0.0
    bounds_lo: dict[int, float] = {}
    bounds_up: dict[int, float] = {}
    section = None

    def col_of(tok: str, line_no: int) -> int:
        if tok not in col_index:
            col_index[tok] = len(col_names)
            col_names.append(tok)
        return col_index[tok]

    def row_of(tok: str, line_no: int) -> int:
        idx = row_index.get(tok)
        if idx is None:
            raise MpsParseError(line_no, f"unknown row {tok!r}")
        return idx

    for line_no, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        is_header = not raw[0].isspace()
        if is_header:
            tokens = raw.split()
            head = tokens[0].upper()
            if head not in _SECTIONS:
                raise MpsParseError(line_no, f"unknown section {tokens[0]!r}")
            section = head
            expect_objsense_value = False
            if head == "NAME":
                name = tokens[1] if len(tokens) > 1 else ""
            elif head == "OBJSENSE":
                if len(tokens) > 1:
                    maximize = tokens[1].upper().startswith("MAX")
                else:
                    expect_objsense_value = True
            elif head == "ENDATA":
                break
            continue

        if section is None:
            raise MpsParseError(line_no, "data before any section header")
        tokens = _tokenize(raw, fixed)
        if not tokens:
            continue

        if section == "OBJSENSE":
            if expect_objsense_value:
                maximize = tokens[0].upper().startswith("MAX")
                expect_objsense_value = False
            continue

        if section == "ROWS":
            if len(tokens) != 2:
                raise MpsParseError(line_no, "ROWS line needs a type and a name")
            rtype = tokens[0].upper()
            rname = tokens[1]
            if rtype not in ("N", "L", "G", "E"):
                raise MpsParseError(line_no, f"unknown row type {tokens[0]!r}")
            if rname in row_index or rname == objective_name:
                raise MpsParseError(line_no, f"duplicate row name {rname!r}")
            if rtype == "N" and not objective_name:
                objective_name = rname
                continue
            row_index[rname] = len(row_names)
            row_names.append(rname)
            row_type[rname] = rtype
            continue

        if section == "COLUMNS":
            if any(t in ("'MARKER'", "MARKER") for t in tokens):
                if any("INTORG" in t for t in tokens):
                    raise MpsParseError(line_no, "integer markers are not supported")
                continue  # INTEND without INTORG: nothing to close
            if len(tokens) < 3 or len(tokens) % 2 == 0:
                raise MpsParseError(line_no, "COLUMNS line needs name + row/value pairs")
            k = col_of(tokens[0], line_no)
            for t in range(1, len(tokens), 2):
                rname = tokens[t]
                value = _parse_value(tokens[t + 1], line_no)
                if rname == objective_name:
                    c_by_col[k] = c_by_col.get(k, 0.0) + value
                else:
                    entries.append((row_of(rname, line_no), k, value))
            continue

        if section in ("RHS", "RANGES"):
            pairs = tokens[1:] if len(tokens) % 2 == 1 else tokens
            if len(pairs) < 2:
                raise MpsParseError(line_no, f"{section} line needs row/value pairs")
            for t in range(0, len(pairs), 2):
                rname = pairs[t]
                value = _parse_value(pairs[t + 1], line_no)
                if rname == objective_name:
                    if section == "RANGES":
                        raise MpsParseError(line_no, "RANGES on the objective row")
                    offset = -value
                elif section == "RHS":
                    rhs[row_of(rname, line_no)] = value
                else:
                    i = row_of(rname, line_no)
                    if row_type[rname] == "N":
                        raise MpsParseError(line_no, "RANGES on a free row")
                    ranges[i] = value
            continue

        if section == "BOUNDS":
            btype = tokens[0].upper()
            if btype in ("BV", "LI", "UI"):
                raise MpsParseError(line_no, f"integer bound type {btype} not supported")
            if btype in ("LO", "UP", "FX"):
                if len(tokens) == 4:
                    cname, vtok = tokens[2], tokens[3]
                elif len(tokens) == 3:
                    cname, vtok = tokens[1], tokens[2]
                else:
                    raise MpsParseError(line_no, f"{btype} bound needs a column and value")
                value = _parse_value(vtok, line_no)
            elif btype in ("FR", "MI", "PL"):
                if len(tokens) == 3:
                    cname = tokens[2]
                elif len(tokens) == 2:
                    cname = tokens[1]
                else:
                    raise MpsParseError(line_no, f"{btype} bound needs a column")
                value = 0.0
            else:
                raise MpsParseError(line_no, f"unknown bound type {tokens[0]!r}")
            if cname not in col_index:
                raise MpsParseError(line_no, f"bound on unknown column {cname!r}")
            k = col_index[cname]
            if btype == "LO":
                bounds_lo[k] = value
            elif btype == "UP":
                bounds_up[k] = value
            elif btype == "FX":
                bounds_lo[k] = value
                bounds_up[k] = value
            elif btype == "FR":
                bounds_lo[k] = -INF
                bounds_up[k] = INF
            elif btype == "MI":
                bounds_lo[k] = -INF
            else:  # PL
                bounds_up[k] = INF
            continue

        raise MpsParseError(line_no, f"data in unsupported section {section}")

    m = len(row_names)
    n = len(col_names)
    row_lower = [0.0] * m
    row_upper = [0.0] * m
    for i, rname in enumerate(row_names):
        rt = row_type[rname]
        b = rhs.get(i, 0.0)
        if rt == "N":
            lo, hi = -INF, INF
        elif rt == "L":
            lo, hi = -INF, b
        elif rt == "G":
            lo, hi = b, INF
        else:
            lo, hi = b, b
        if i in ranges:
            r = ranges[i]
            if rt == "L":
                lo = b - abs(r)
            elif rt == "G":
                hi = b + abs(r)
            elif rt == "E":
                lo, hi = (b, b + r) if r >= 0 else (b + r, b)
        row_lower[i] = lo
        row_upper[i] = hi

    c = [c_by_col.get(k, 0.0) for k in range(n)]
    col_lower = [bounds_lo.get(k, 0.0) for k in range(n)]
    col_upper = [bounds_up.get(k, INF) for k in range(n)]
    if maximize:
        c = [-v for v in c]
        offset = -offset

    return LpProblem.from_entries(
        m,
        n,
        entries,
        c,
        col_lower,
        col_upper,
        row_lower,
        row_upper,
        offset=offset,
        name=name,
        objective_name=objective_name or "OBJ",
        row_names=row_names,
        col_names=col_names,
    )


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_mps(problem: LpProblem) -> bytes:
    """Serialize to free-format MPS; read_mps(write_mps(p)) equals p.

    A ranged row becomes an L row plus a RANGES entry. A column with no
    matrix entries and zero cost is pinned into existence with an explicit
    zero objective entry, which the reader registers and then drops.
    """
    m, n = problem.num_rows, problem.num_cols
    obj = problem.objective_name
    lines = [f"NAME {problem.name}".rstrip(), "ROWS", f" N {obj}"]
    ranged: list[int] = []
    for i in range(m):
        lo = problem.row_lower[i]
        hi = problem.row_upper[i]
        rname = problem.row_names[i]
        if lo == -INF and hi == INF:
            lines.append(f" N {rname}")
        elif lo == hi:
            lines.append(f" E {rname}")
        elif lo > -INF and hi < INF:
            ranged.append(i)
            lines.append(f" L {rname}")
        elif hi < INF:
            lines.append(f" L {rname}")
        else:
            lines.append(f" G {rname}")

    col_entries: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i in range(m):
        if not problem.matrix.row_is_alive(i):
            continue
        for k, v in sorted(problem.matrix.row_entries(i)):
            col_entries[k].append((i, v))

    lines.append("COLUMNS")
    for k in range(n):
        cname = problem.col_names[k]
        ck = problem.c[k]
        if ck != 0.0 or not col_entries[k]:
            lines.append(f"    {cname} {obj} {_fmt(ck)}")
        for i, v in sorted(col_entries[k]):
            lines.append(f"    {cname} {problem.row_names[i]} {_fmt(v)}")

    lines.append("RHS")
    if problem.offset != 0.0:
        lines.append(f"    RHS {obj} {_fmt(-problem.offset)}")
    for i in range(m):
        lo = problem.row_lower[i]
        hi = problem.row_upper[i]
        if lo == -INF and hi == INF:
            continue
        b = hi if hi < INF else lo
        if b != 0.0:
            lines.append(f"    RHS {problem.row_names[i]} {_fmt(b)}")

    if ranged:
        lines.append("RANGES")
        for i in ranged:
            r = problem.row_upper[i] - problem.row_lower[i]
            lines.append(f"    RNG {problem.row_names[i]} {_fmt(r)}")

    bound_lines = []
    for k in range(n):
        lo = problem.col_lower[k]
        hi = problem.col_upper[k]
        cname = problem.col_names[k]
        if lo == -INF and hi == INF:
            bound_lines.append(f" FR BND {cname}")
            continue
        if lo == hi:
            bound_lines.append(f" FX BND {cname} {_fmt(lo)}")
            continue
        if lo == -INF:
            bound_lines.append(f" MI BND {cname}")
        elif lo != 0.0:
            bound_lines.append(f" LO BND {cname} {_fmt(lo)}")
        if hi < INF:
            bound_lines.append(f" UP BND {cname} {_fmt(hi)}")
    if bound_lines:
        lines.append("BOUNDS")
        lines.extend(bound_lines)

    lines.append("ENDATA")
    return ("\n".join(lines) + "\n").encode("latin-1")
