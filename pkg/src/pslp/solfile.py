"""Text format for primal-dual solution files.

Line-oriented and diff-friendly: a version header, the status, the two
dimension lines, then one value per line for x, y, and z in that order,
each tagged with its section letter. Values are written with 17 significant
digits so round-trips are exact.
"""

from __future__ import annotations

import numpy as np

from .problem import PrimalDualSolution, SolutionStatus

_HEADER = "pslp solution 1"


class SolutionFormatError(ValueError):
    """Malformed solution file; message carries the 1-based line number."""


def write_solution(solution: PrimalDualSolution) -> bytes:
    lines = [
        _HEADER,
        f"status {solution.status.value}",
        f"cols {solution.x.shape[0]}",
        f"rows {solution.y.shape[0]}",
    ]
    for v in solution.x:
        lines.append(f"x {v:.17g}")
    for v in solution.y:
        lines.append(f"y {v:.17g}")
    for v in solution.z:
        lines.append(f"z {v:.17g}")
    return ("\n".join(lines) + "\n").encode("ascii")


def read_solution(data: bytes) -> PrimalDualSolution:
    lines = data.decode("ascii").splitlines()
    if not lines or lines[0].strip() != _HEADER:
        raise SolutionFormatError("line 1: missing solution header")
    fields: dict[str, str] = {}
    values: dict[str, list[float]] = {"x": [], "y": [], "z": []}
    for line_no, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        try:
            key, value = line.split(None, 1)
        except ValueError:
            raise SolutionFormatError(f"line {line_no}: expected 'key value'") from None
        if key in values:
            try:
                values[key].append(float(value))
            except ValueError:
                raise SolutionFormatError(
                    f"line {line_no}: bad numeric value {value!r}"
                ) from None
        elif key in ("status", "cols", "rows"):
            fields[key] = value.strip()
        else:
            raise SolutionFormatError(f"line {line_no}: unknown line type {key!r}")
    try:
        status = SolutionStatus(fields.get("status", "unknown"))
    except ValueError:
        raise SolutionFormatError(f"unknown status {fields.get('status')!r}") from None
    try:
        n = int(fields["cols"])
        m = int(fields["rows"])
    except (KeyError, ValueError):
        raise SolutionFormatError("missing or bad cols/rows header") from None
    if len(values["x"]) != n or len(values["z"]) != n or len(values["y"]) != m:
        raise SolutionFormatError(
            f"value counts (x={len(values['x'])}, y={len(values['y'])}, "
            f"z={len(values['z'])}) do not match dims cols={n} rows={m}"
        )
    return PrimalDualSolution(
        np.array(values["x"]), np.array(values["y"]), np.array(values["z"]), status
    )
