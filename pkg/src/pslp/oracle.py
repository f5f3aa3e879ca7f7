"""Dense reference solver and reproducible instance generator.

The solver is a two-phase bounded-variable primal simplex with Bland's rule
throughout: slow, dense, deterministic, cycle-free. It exists to produce
trustworthy optimal primal-dual pairs for small problems in tests and the
CLI's --oracle mode, and it refuses anything larger than the size cap.

The generator emits problems on a 0.25 grid so that all planted arithmetic
(activities, parallel scalings, certificate costs) is exact in binary
floating point. With feasibility="forced" it plants an interior point and a
dual certificate, so the instance is both feasible and bounded by
construction.
"""

from __future__ import annotations

import math

import numpy as np

from .problem import LpProblem, PrimalDualSolution, SolutionStatus

INF = math.inf

#: Largest rows + cols the dense oracle will accept.
ORACLE_SIZE_CAP = 60

_AT_LOWER, _AT_UPPER, _FREE = 0, 1, 2

#: Pivot magnitudes below this do not qualify for the ratio test.
_PIVOT_EPS = 1e-11


class OracleSizeError(ValueError):
    """Problem exceeds the dense oracle's size cap."""


def _simplex(M, lb, ub, c, basis, status, vals, n_enterable, tol, max_iters):
    """Run Bland-rule iterations until optimal or unbounded.

    Mutates basis/status/vals in place. Only variables with index below
    ``n_enterable`` may enter the basis (artificials are priced out by
    exclusion). Returns "optimal" or "unbounded".
    """
    m = M.shape[0]
    for _ in range(max_iters):
        in_basis = np.zeros(M.shape[1], dtype=bool)
        in_basis[basis] = True
        B = M[:, basis]
        nb_vals = np.where(in_basis, 0.0, vals)
        try:
            x_basic = np.linalg.solve(B, -(M @ nb_vals))
            y = np.linalg.solve(B.T, c[basis])
        except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
            raise RuntimeError("singular basis in reference solver") from exc
        for pos, j in enumerate(basis):
            vals[j] = x_basic[pos]

        reduced = c - y @ M
        entering = -1
        direction = 0
        for j in range(n_enterable):
            if in_basis[j]:
                continue
            dj = reduced[j]
            if status[j] == _AT_LOWER and dj < -tol:
                entering, direction = j, 1
                break
            if status[j] == _AT_UPPER and dj > tol:
                entering, direction = j, -1
                break
            if status[j] == _FREE and abs(dj) > tol:
                entering, direction = j, (1 if dj < 0 else -1)
                break
        if entering < 0:
            return "optimal"

        w = np.linalg.solve(B, M[:, entering])
        g = direction * w
        # limits: (theta, blocking variable index, basis position or -1 for
        # the entering variable's own bound flip)
        limits = []
        span = ub[entering] - lb[entering]
        if span < INF:
            limits.append((span, entering, -1))
        for pos in range(m):
            jb = basis[pos]
            xb = vals[jb]
            if g[pos] > _PIVOT_EPS and lb[jb] > -INF:
                limits.append(((xb - lb[jb]) / g[pos], jb, pos))
            elif g[pos] < -_PIVOT_EPS and ub[jb] < INF:
                limits.append(((ub[jb] - xb) / (-g[pos]), jb, pos))
        if not limits:
            return "unbounded"
        theta = min(t for t, _, _ in limits)
        theta = max(theta, 0.0)
        blocking = min(
            (jvar, pos) for t, jvar, pos in limits if t <= theta + 1e-12
        )
        if blocking[1] == -1:
            # entering variable flips to its opposite bound
            if status[entering] == _AT_LOWER:
                status[entering] = _AT_UPPER
                vals[entering] = ub[entering]
            else:
                status[entering] = _AT_LOWER
                vals[entering] = lb[entering]
            continue
        pos = blocking[1]
        leaving = basis[pos]
        vals[entering] = vals[entering] + direction * theta
        if g[pos] > 0:
            status[leaving] = _AT_LOWER
            vals[leaving] = lb[leaving]
        else:
            status[leaving] = _AT_UPPER
            vals[leaving] = ub[leaving]
        basis[pos] = entering
        status[entering] = _FREE  # basic; placeholder, never read
    raise RuntimeError("reference solver hit the iteration limit")


def solve_dense(
    problem: LpProblem,
    *,
    size_cap: int = ORACLE_SIZE_CAP,
    max_iters: int = 20000,
    tol: float = 1e-9,
) -> PrimalDualSolution:
    """Solve a small LP exactly enough to serve as a test oracle.

    Returns a solution with status OPTIMAL, PRIMAL_INFEASIBLE, or
    DUAL_INFEASIBLE_OR_UNBOUNDED; x/y/z are zero-filled for the latter two.
    """
    m, n = problem.num_rows, problem.num_cols
    if m + n > size_cap:
        raise OracleSizeError(
            f"problem has {m} rows + {n} cols > size cap {size_cap}"
        )
    A = problem.matrix.to_dense()
    total = n + 2 * m  # structurals, slacks, artificials
    M = np.zeros((m, total))
    M[:, :n] = A
    for i in range(m):
        M[i, n + i] = -1.0
        M[i, n + m + i] = 1.0
    lb = np.concatenate([problem.col_lower, problem.row_lower, np.zeros(m)])
    ub = np.concatenate([problem.col_upper, problem.row_upper, np.zeros(m)])

    status = np.zeros(total, dtype=int)
    vals = np.zeros(total)
    for j in range(n + m):
        if lb[j] > -INF:
            status[j], vals[j] = _AT_LOWER, lb[j]
        elif ub[j] < INF:
            status[j], vals[j] = _AT_UPPER, ub[j]
        else:
            status[j], vals[j] = _FREE, 0.0

    # A x - s + a = 0, so each artificial starts at s_i - (A x)_i; its sign
    # decides which one-sided domain and phase-1 cost keep |a_i| = a_i * c_i.
    act = A @ vals[:n]
    c1 = np.zeros(total)
    basis = list(range(n + m, total))
    for i in range(m):
        target = vals[n + i] - act[i]
        j = n + m + i
        if target >= 0:
            lb[j], ub[j], c1[j] = 0.0, INF, 1.0
        else:
            lb[j], ub[j], c1[j] = -INF, 0.0, -1.0
        vals[j] = target

    outcome = _simplex(M, lb, ub, c1, basis, status, vals, n + m, tol, max_iters)
    if outcome != "optimal":  # pragma: no cover - phase 1 is bounded below
        raise RuntimeError("phase 1 did not terminate at an optimum")
    if float(c1 @ vals) > 1e-7:
        return PrimalDualSolution(
            np.zeros(n), np.zeros(m), np.zeros(n), SolutionStatus.PRIMAL_INFEASIBLE
        )

    # pin artificials at zero for phase 2; basic ones stay harmlessly at 0
    for i in range(m):
        j = n + m + i
        lb[j] = ub[j] = 0.0
        in_b = j in basis
        if not in_b:
            status[j], vals[j] = _AT_LOWER, 0.0
    c2 = np.zeros(total)
    c2[:n] = problem.c
    outcome = _simplex(M, lb, ub, c2, basis, status, vals, n + m, tol, max_iters)
    if outcome == "unbounded":
        return PrimalDualSolution(
            np.zeros(n),
            np.zeros(m),
            np.zeros(n),
            SolutionStatus.DUAL_INFEASIBLE_OR_UNBOUNDED,
        )

    B = M[:, basis]
    y = np.linalg.solve(B.T, c2[basis])
    x = vals[:n].copy()
    z = problem.c - A.T @ y
    return PrimalDualSolution(x, y, z, SolutionStatus.OPTIMAL)


def _quarters(rng, lo: int, hi: int, nonzero: bool = False) -> float:
    """Uniform multiple of 0.25 in [lo/4, hi/4]."""
    while True:
        v = int(rng.integers(lo, hi + 1)) * 0.25
        if nonzero and v == 0.0:
            continue
        return v


_PARALLEL_SCALES = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def random_lp(
    seed: int,
    num_rows: int,
    num_cols: int,
    *,
    density: float = 0.3,
    feasibility: str = "forced",
    equality_frac: float = 0.2,
    ranged_frac: float = 0.15,
    free_var_frac: float = 0.1,
    singleton_rows: int = 0,
    doubleton_rows: int = 0,
    parallel_row_pairs: int = 0,
    parallel_col_pairs: int = 0,
) -> LpProblem:
    """Reproducible random LP on a 0.25 grid.

    feasibility="forced" plants an interior point x0 (sides and bounds leave
    slack around it) and a sign-feasible dual pair (y*, z*) with the cost
    set to A.T @ y* + z*, so the instance has an optimum. "unrestricted"
    draws sides and costs independently and may be infeasible or unbounded.
    """
    if feasibility not in ("forced", "unrestricted"):
        raise ValueError(f"unknown feasibility mode {feasibility!r}")
    rng = np.random.default_rng(seed)

    parallel_col_pairs = min(parallel_col_pairs, max(num_cols - 1, 0))
    base_cols = num_cols - parallel_col_pairs
    parallel_row_pairs = min(parallel_row_pairs, max(num_rows - 1, 0))
    doubleton_rows = min(doubleton_rows, max(num_rows - parallel_row_pairs, 0))
    if base_cols < 2:
        doubleton_rows = 0
    singleton_rows = min(
        singleton_rows, max(num_rows - parallel_row_pairs - doubleton_rows, 0)
    )
    if base_cols < 1:
        singleton_rows = 0
    base_rows = num_rows - singleton_rows - doubleton_rows - parallel_row_pairs

    row_specs: list[dict[int, float]] = []
    equality_forced: list[bool] = []
    for _ in range(base_rows):
        row: dict[int, float] = {}
        for k in range(base_cols):
            if rng.random() < density:
                row[k] = _quarters(rng, -12, 12, nonzero=True)
        row_specs.append(row)
        equality_forced.append(False)
    for _ in range(singleton_rows):
        k = int(rng.integers(0, base_cols))
        row_specs.append({k: _quarters(rng, -12, 12, nonzero=True)})
        equality_forced.append(False)
    for _ in range(doubleton_rows):
        p = int(rng.integers(0, base_cols))
        q = int(rng.integers(0, base_cols - 1))
        if q >= p:
            q += 1
        row_specs.append(
            {
                p: _quarters(rng, -12, 12, nonzero=True),
                q: _quarters(rng, -12, 12, nonzero=True),
            }
        )
        equality_forced.append(True)
    for _ in range(parallel_row_pairs):
        candidates = [t for t in range(len(row_specs)) if row_specs[t]]
        if not candidates:
            row_specs.append({})
            equality_forced.append(False)
            continue
        src = candidates[int(rng.integers(0, len(candidates)))]
        s = _PARALLEL_SCALES[int(rng.integers(0, len(_PARALLEL_SCALES)))]
        row_specs.append({k: s * v for k, v in row_specs[src].items()})
        equality_forced.append(equality_forced[src])

    parallel_members: set[int] = set()
    for t in range(parallel_col_pairs):
        q = base_cols + t
        nonempty = [
            k
            for k in range(base_cols)
            if any(k in row for row in row_specs)
        ]
        p = (
            nonempty[int(rng.integers(0, len(nonempty)))]
            if nonempty
            else int(rng.integers(0, max(base_cols, 1)))
        )
        s = _PARALLEL_SCALES[int(rng.integers(0, len(_PARALLEL_SCALES)))]
        for row in row_specs:
            if p in row:
                row[q] = s * row[p]
        parallel_members.add(p)
        parallel_members.add(q)

    entries = [
        (i, k, v) for i, row in enumerate(row_specs) for k, v in sorted(row.items())
    ]

    x0 = np.array([_quarters(rng, -8, 8) for _ in range(num_cols)])
    col_lower = np.full(num_cols, -INF)
    col_upper = np.full(num_cols, INF)
    for k in range(num_cols):
        if rng.random() < free_var_frac:
            continue
        lo = x0[k] - _quarters(rng, 1, 8)
        hi = x0[k] + _quarters(rng, 1, 8)
        drop_lo = rng.random() < 0.15
        drop_hi = rng.random() < 0.15
        if not drop_lo:
            col_lower[k] = lo
        if not drop_hi:
            col_upper[k] = hi

    matrix_entries = entries
    problem_kwargs = dict(name=f"rand-{seed}")

    if feasibility == "forced":
        temp = LpProblem.from_entries(
            num_rows,
            num_cols,
            matrix_entries,
            np.zeros(num_cols),
            col_lower,
            col_upper,
            np.zeros(num_rows),
            np.zeros(num_rows),
        )
        act0 = temp.activities(x0)
        row_lower = np.full(num_rows, -INF)
        row_upper = np.full(num_rows, INF)
        for i in range(num_rows):
            r = rng.random()
            if equality_forced[i] or r < equality_frac:
                row_lower[i] = row_upper[i] = act0[i]
            elif r < equality_frac + ranged_frac:
                row_lower[i] = act0[i] - _quarters(rng, 1, 8)
                row_upper[i] = act0[i] + _quarters(rng, 1, 8)
            elif rng.random() < 0.5:
                row_lower[i] = act0[i] - _quarters(rng, 1, 8)
            else:
                row_upper[i] = act0[i] + _quarters(rng, 1, 8)

        y_star = np.zeros(num_rows)
        for i in range(num_rows):
            lo_fin = row_lower[i] > -INF
            hi_fin = row_upper[i] < INF
            if lo_fin and hi_fin:
                y_star[i] = _quarters(rng, -8, 8)
            elif lo_fin:
                y_star[i] = _quarters(rng, 0, 8)
            elif hi_fin:
                y_star[i] = -_quarters(rng, 0, 8)
        z_star = np.zeros(num_cols)
        for k in range(num_cols):
            if k in parallel_members:
                continue
            lo_fin = col_lower[k] > -INF
            hi_fin = col_upper[k] < INF
            if lo_fin and hi_fin:
                z_star[k] = _quarters(rng, -8, 8)
            elif lo_fin:
                z_star[k] = _quarters(rng, 0, 8)
            elif hi_fin:
                z_star[k] = -_quarters(rng, 0, 8)
        c = temp.matrix.rmatvec(y_star) + z_star
        return LpProblem(
            c,
            col_lower,
            col_upper,
            row_lower,
            row_upper,
            temp.matrix,
            **problem_kwargs,
        )

    row_lower = np.full(num_rows, -INF)
    row_upper = np.full(num_rows, INF)
    for i in range(num_rows):
        center = _quarters(rng, -8, 8)
        r = rng.random()
        if equality_forced[i] or r < equality_frac:
            row_lower[i] = row_upper[i] = center
        elif r < equality_frac + ranged_frac:
            row_lower[i] = center - _quarters(rng, 1, 8)
            row_upper[i] = center + _quarters(rng, 1, 8)
        elif rng.random() < 0.5:
            row_lower[i] = center
        else:
            row_upper[i] = center
    c = np.array([_quarters(rng, -8, 8) for _ in range(num_cols)])
    return LpProblem.from_entries(
        num_rows,
        num_cols,
        matrix_entries,
        c,
        col_lower,
        col_upper,
        row_lower,
        row_upper,
        **problem_kwargs,
    )
