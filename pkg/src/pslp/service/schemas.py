"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ConfigModel(BaseModel):
    max_rounds: int = 16
    strong_dual: bool = True
    time_limit: float | None = None
    disable: list[str] = Field(default_factory=list)


class SolutionModel(BaseModel):
    """Primal-dual point; lengths must match the problem it refers to."""

    x: list[float]
    y: list[float]
    z: list[float]
    status: str = "optimal"


class KktModel(BaseModel):
    primal_residual: float
    bound_violation: float
    dual_residual: float
    complementarity: float
    scale: float
    max_residual: float


class ReportModel(BaseModel):
    status: str
    rows_before: int
    rows_after: int
    cols_before: int
    cols_after: int
    nnz_before: int
    nnz_after: int
    nnz_ratio: float
    rounds: int
    reductions_total: int
    reductions: dict[str, int] = Field(default_factory=dict)
    total_time_seconds: float = 0.0


class PresolveRequest(BaseModel):
    """Provide the instance as MPS text or gzipped MPS in base64."""

    mps: str | None = None
    mps_gzip_b64: str | None = None
    config: ConfigModel = Field(default_factory=ConfigModel)
    solve_reduced: bool = False


class PresolveResponse(BaseModel):
    status: str
    reduced_mps: str
    journal_b64: str
    report: ReportModel
    reduced_solution: SolutionModel | None = None


class PostsolveRequest(BaseModel):
    journal_b64: str
    solution: SolutionModel
    original_mps: str | None = None
    tol: float = 1e-6


class PostsolveResponse(BaseModel):
    solution: SolutionModel
    objective: float | None = None
    kkt: KktModel | None = None


class RoundtripRequest(BaseModel):
    mps: str | None = None
    mps_gzip_b64: str | None = None
    config: ConfigModel = Field(default_factory=ConfigModel)
    tol: float = 1e-6


class RoundtripResponse(BaseModel):
    """status: ok | infeasible | unbounded | cap_exceeded."""

    status: str
    passed: bool | None = None
    kkt: KktModel | None = None
    objective_reduced: float | None = None
    objective_original: float | None = None
    report: ReportModel | None = None


class CheckRequest(BaseModel):
    mps: str | None = None
    mps_gzip_b64: str | None = None
    solution: SolutionModel
    tol: float = 1e-6


class CheckResponse(BaseModel):
    kkt: KktModel
    passed: bool
