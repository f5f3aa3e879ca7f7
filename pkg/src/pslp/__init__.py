"""Solver-independent LP presolving with exact primal-dual postsolve."""

from .driver import (
    EXPLORER_NAMES,
    PresolveConfig,
    PresolveReport,
    PresolveResult,
    presolve,
    validate,
)
from .journal import JournalIntegrityError, PostsolveJournal
from .metrics import arithmetic_mean, geometric_mean, shifted_geometric_mean
from .mps import MpsParseError, read_mps, write_mps
from .oracle import ORACLE_SIZE_CAP, OracleSizeError, random_lp, solve_dense
from .postsolve import postsolve
from .problem import (
    FEAS_TOL,
    INF_THRESHOLD,
    KktReport,
    LpProblem,
    PresolveStatus,
    PrimalDualSolution,
    SolutionStatus,
    check_kkt,
    objective_value,
)
from .solfile import SolutionFormatError, read_solution, write_solution

__version__ = "0.1.0"

__all__ = [
    "EXPLORER_NAMES",
    "FEAS_TOL",
    "INF_THRESHOLD",
    "JournalIntegrityError",
    "KktReport",
    "LpProblem",
    "MpsParseError",
    "ORACLE_SIZE_CAP",
    "OracleSizeError",
    "PostsolveJournal",
    "PresolveConfig",
    "PresolveReport",
    "PresolveResult",
    "PresolveStatus",
    "PrimalDualSolution",
    "SolutionFormatError",
    "SolutionStatus",
    "arithmetic_mean",
    "check_kkt",
    "geometric_mean",
    "objective_value",
    "postsolve",
    "presolve",
    "random_lp",
    "read_mps",
    "read_solution",
    "shifted_geometric_mean",
    "solve_dense",
    "validate",
    "write_mps",
    "write_solution",
    "__version__",
]
