"""HTTP service exposing presolve, postsolve, and verification.

The service wraps the library one endpoint per pipeline stage; the CLI is a
client of these endpoints. Instances travel as MPS text (or gzipped MPS in
base64), journals as base64 binary, solutions as JSON vectors.
"""

from __future__ import annotations

import base64
import binascii
import gzip

import numpy as np
from fastapi import FastAPI, HTTPException

from ..driver import PresolveConfig, PresolveReport, presolve
from ..journal import JournalIntegrityError, PostsolveJournal
from ..mps import MpsParseError, read_mps, write_mps
from ..oracle import OracleSizeError, solve_dense
from ..postsolve import postsolve
from ..problem import (
    KktReport,
    LpProblem,
    PresolveStatus,
    PrimalDualSolution,
    SolutionStatus,
    check_kkt,
    objective_value,
)
from .schemas import (
    CheckRequest,
    CheckResponse,
    ConfigModel,
    KktModel,
    PostsolveRequest,
    PostsolveResponse,
    PresolveRequest,
    PresolveResponse,
    ReportModel,
    RoundtripRequest,
    RoundtripResponse,
    SolutionModel,
)

SERVICE_VERSION = "0.1.0"


def _problem_from(mps: str | None, mps_gzip_b64: str | None) -> LpProblem:
    if (mps is None) == (mps_gzip_b64 is None):
        raise HTTPException(400, "provide exactly one of mps, mps_gzip_b64")
    try:
        if mps is not None:
            return read_mps(mps.encode("latin-1"))
        data = base64.b64decode(mps_gzip_b64, validate=True)
        return read_mps(data)
    except MpsParseError as exc:
        raise HTTPException(400, f"MPS parse error: {exc}") from exc
    except (binascii.Error, gzip.BadGzipFile) as exc:
        raise HTTPException(400, f"bad payload encoding: {exc}") from exc


def _config_from(model: ConfigModel) -> PresolveConfig:
    try:
        return PresolveConfig(
            max_rounds=model.max_rounds,
            strong_dual=model.strong_dual,
            time_limit=model.time_limit,
            disabled=frozenset(model.disable),
        )
    except ValueError as exc:
        raise HTTPException(400, str(exc)) from exc


def _solution_model(solution: PrimalDualSolution) -> SolutionModel:
    return SolutionModel(
        x=[float(v) for v in solution.x],
        y=[float(v) for v in solution.y],
        z=[float(v) for v in solution.z],
        status=solution.status.value,
    )


def _solution_from(model: SolutionModel) -> PrimalDualSolution:
    try:
        status = SolutionStatus(model.status)
    except ValueError as exc:
        raise HTTPException(400, f"unknown solution status {model.status!r}") from exc
    return PrimalDualSolution(
        np.array(model.x, dtype=float),
        np.array(model.y, dtype=float),
        np.array(model.z, dtype=float),
        status,
    )


def _kkt_model(report: KktReport) -> KktModel:
    return KktModel(
        primal_residual=report.primal_residual,
        bound_violation=report.bound_violation,
        dual_residual=report.dual_residual,
        complementarity=report.complementarity,
        scale=report.scale,
        max_residual=report.max_residual,
    )


def _report_model(report: PresolveReport) -> ReportModel:
    return ReportModel(
        status=report.status,
        rows_before=report.rows_before,
        rows_after=report.rows_after,
        cols_before=report.cols_before,
        cols_after=report.cols_after,
        nnz_before=report.nnz_before,
        nnz_after=report.nnz_after,
        nnz_ratio=report.nnz_ratio,
        rounds=report.rounds,
        reductions_total=report.total_reductions,
        reductions=dict(report.counts),
        total_time_seconds=report.total_time,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="pslp", version=SERVICE_VERSION)

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": SERVICE_VERSION}

    @app.post("/v1/presolve", response_model=PresolveResponse)
    def presolve_endpoint(req: PresolveRequest) -> PresolveResponse:
        problem = _problem_from(req.mps, req.mps_gzip_b64)
        config = _config_from(req.config)
        try:
            result = presolve(problem, config)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        reduced_solution = None
        if req.solve_reduced and result.status in (
            PresolveStatus.REDUCED,
            PresolveStatus.UNCHANGED,
            PresolveStatus.SOLVED_COMPLETELY,
        ):
            try:
                reduced_solution = _solution_model(solve_dense(result.problem))
            except OracleSizeError:
                reduced_solution = None
        return PresolveResponse(
            status=result.status.value,
            reduced_mps=write_mps(result.problem).decode("latin-1"),
            journal_b64=base64.b64encode(result.journal.to_bytes()).decode("ascii"),
            report=_report_model(result.report),
            reduced_solution=reduced_solution,
        )

    @app.post("/v1/postsolve", response_model=PostsolveResponse)
    def postsolve_endpoint(req: PostsolveRequest) -> PostsolveResponse:
        try:
            journal = PostsolveJournal.from_bytes(
                base64.b64decode(req.journal_b64, validate=True)
            )
        except (JournalIntegrityError, binascii.Error) as exc:
            raise HTTPException(400, f"bad journal: {exc}") from exc
        reduced = _solution_from(req.solution)
        try:
            original = postsolve(journal, reduced)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        objective = None
        kkt = None
        if req.original_mps is not None:
            orig_problem = _problem_from(req.original_mps, None)
            if (
                orig_problem.num_rows != journal.original_rows
                or orig_problem.num_cols != journal.original_cols
            ):
                raise HTTPException(
                    400, "original_mps dimensions do not match the journal"
                )
            objective = objective_value(orig_problem, original.x)
            kkt = _kkt_model(check_kkt(orig_problem, original, req.tol))
        return PostsolveResponse(
            solution=_solution_model(original), objective=objective, kkt=kkt
        )

    @app.post("/v1/roundtrip", response_model=RoundtripResponse)
    def roundtrip_endpoint(req: RoundtripRequest) -> RoundtripResponse:
        problem = _problem_from(req.mps, req.mps_gzip_b64)
        config = _config_from(req.config)
        try:
            result = presolve(problem, config)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        report = _report_model(result.report)
        if result.status == PresolveStatus.INFEASIBLE_PRIMAL:
            return RoundtripResponse(status="infeasible", report=report)
        if result.status == PresolveStatus.UNBOUNDED_OR_INFEASIBLE_DUAL:
            return RoundtripResponse(status="unbounded", report=report)
        try:
            reduced_sol = solve_dense(result.problem)
        except OracleSizeError:
            return RoundtripResponse(status="cap_exceeded", report=report)
        if reduced_sol.status == SolutionStatus.PRIMAL_INFEASIBLE:
            return RoundtripResponse(status="infeasible", report=report)
        if reduced_sol.status == SolutionStatus.DUAL_INFEASIBLE_OR_UNBOUNDED:
            return RoundtripResponse(status="unbounded", report=report)
        original_sol = postsolve(result.journal, reduced_sol)
        kkt = check_kkt(problem, original_sol, req.tol)
        return RoundtripResponse(
            status="ok",
            passed=kkt.passed(req.tol),
            kkt=_kkt_model(kkt),
            objective_reduced=objective_value(result.problem, reduced_sol.x),
            objective_original=objective_value(problem, original_sol.x),
            report=report,
        )

    @app.post("/v1/check", response_model=CheckResponse)
    def check_endpoint(req: CheckRequest) -> CheckResponse:
        problem = _problem_from(req.mps, req.mps_gzip_b64)
        solution = _solution_from(req.solution)
        try:
            kkt = check_kkt(problem, solution, req.tol)
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        return CheckResponse(kkt=_kkt_model(kkt), passed=kkt.passed(req.tol))

    return app


app = create_app()
