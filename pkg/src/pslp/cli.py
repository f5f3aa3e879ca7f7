"""Command line front end.

Every command is a client of the HTTP service: by default an in-process
instance (no socket), or a remote one named by --server / PSLP_SERVER.

Exit codes: 0 success (reduced/unchanged, roundtrip within tolerance),
1 parse or usage failure, 2 infeasible, 3 unbounded-or-dual-infeasible,
4 solved completely by presolve alone, 5 oracle size cap exceeded.
"""

from __future__ import annotations

import base64
import logging
import os
import sys
from pathlib import Path

import click
import numpy as np

from .driver import EXPLORER_NAMES, PresolveReport
from .metrics import arithmetic_mean, geometric_mean, shifted_geometric_mean
from .oracle import random_lp
from .mps import write_mps
from .problem import PrimalDualSolution, SolutionStatus
from .solfile import SolutionFormatError, read_solution, write_solution

_STATUS_EXIT = {
    "reduced": 0,
    "unchanged": 0,
    "solved_completely": 4,
    "infeasible_primal": 2,
    "unbounded_or_infeasible_dual": 3,
}


class _Client:
    """Minimal POST client; in-process ASGI unless a server URL is given."""

    def __init__(self, server: str | None) -> None:
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise click.ClickException(f"{path} failed: {detail}")
        return response.json()


def _server_option(fn):
    return click.option(
        "--server",
        envvar="PSLP_SERVER",
        default=None,
        help="base URL of a running service; default is in-process",
    )(fn)


def _config_options(fn):
    fn = click.option("--max-rounds", default=16, show_default=True)(fn)
    fn = click.option("--strong-dual/--no-strong-dual", default=True, show_default=True)(fn)
    fn = click.option("--time-limit", type=float, default=None)(fn)
    fn = click.option("--disable-all", is_flag=True, help="disable every explorer")(fn)
    for name in reversed(EXPLORER_NAMES):
        fn = click.option(
            "--disable-" + name.replace("_", "-"),
            "disable_" + name,
            is_flag=True,
        )(fn)
    return fn


def _random_options(fn):
    fn = click.option("--seed", default=0, show_default=True)(fn)
    fn = click.option("--rand-rows", default=12, show_default=True)(fn)
    fn = click.option("--rand-cols", default=12, show_default=True)(fn)
    return fn


def _config_payload(max_rounds, strong_dual, time_limit, disable_all, kwargs) -> dict:
    disable = [n for n in EXPLORER_NAMES if kwargs.pop(f"disable_{n}", False)]
    if disable_all:
        disable = list(EXPLORER_NAMES)
    return {
        "max_rounds": max_rounds,
        "strong_dual": strong_dual,
        "time_limit": time_limit,
        "disable": disable,
    }


def _input_payload(input_path: str, seed: int, rand_rows: int, rand_cols: int) -> dict:
    """Read INPUT (a path, or the literal 'random') into a request payload."""
    if input_path == "random":
        problem = random_lp(
            seed,
            rand_rows,
            rand_cols,
            density=0.35,
            singleton_rows=2,
            doubleton_rows=2,
            parallel_row_pairs=1,
            parallel_col_pairs=1,
        )
        data = write_mps(problem)
    else:
        try:
            data = Path(input_path).read_bytes()
        except OSError as exc:
            raise click.ClickException(f"cannot read {input_path}: {exc}") from exc
    if data[:2] == b"\x1f\x8b":
        return {"mps_gzip_b64": base64.b64encode(data).decode("ascii")}
    return {"mps": data.decode("latin-1")}


def _report_from_model(model: dict) -> PresolveReport:
    return PresolveReport(
        status=model["status"],
        rows_before=model["rows_before"],
        cols_before=model["cols_before"],
        nnz_before=model["nnz_before"],
        rows_after=model["rows_after"],
        cols_after=model["cols_after"],
        nnz_after=model["nnz_after"],
        rounds=model["rounds"],
        counts=dict(model.get("reductions", {})),
        total_time=model.get("total_time_seconds", 0.0),
    )


def _solution_from_model(model: dict) -> PrimalDualSolution:
    return PrimalDualSolution(
        np.array(model["x"], dtype=float),
        np.array(model["y"], dtype=float),
        np.array(model["z"], dtype=float),
        SolutionStatus(model["status"]),
    )


def _solution_payload(solution: PrimalDualSolution) -> dict:
    return {
        "x": [float(v) for v in solution.x],
        "y": [float(v) for v in solution.y],
        "z": [float(v) for v in solution.z],
        "status": solution.status.value,
    }


def _print_kkt(kkt: dict) -> None:
    click.echo(f"primal residual: {kkt['primal_residual']:.3e}")
    click.echo(f"bound violation: {kkt['bound_violation']:.3e}")
    click.echo(f"dual residual: {kkt['dual_residual']:.3e}")
    click.echo(f"complementarity: {kkt['complementarity']:.3e}")
    click.echo(f"max residual: {kkt['max_residual']:.3e}")


@click.group()
def main() -> None:
    """Presolve linear programs and map solutions back."""
    level = os.environ.get("PSLP_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO))


@main.command("presolve")
@click.argument("input_path", metavar="INPUT")
@click.option("--out", type=click.Path(), default=None, help="write reduced MPS here")
@click.option("--journal", "journal_path", type=click.Path(), default=None)
@click.option(
    "--solution",
    "solution_path",
    type=click.Path(),
    default=None,
    help="write an original-space solution (needs --oracle, or a run solved completely)",
)
@click.option("--report", "report_format", type=click.Choice(["text", "kv"]), default="text")
@click.option("--report-out", type=click.Path(), default=None)
@click.option("--oracle", is_flag=True, help="solve the reduced problem with the reference solver")
@_random_options
@_config_options
@_server_option
def cmd_presolve(
    input_path,
    out,
    journal_path,
    solution_path,
    report_format,
    report_out,
    oracle,
    seed,
    rand_rows,
    rand_cols,
    max_rounds,
    strong_dual,
    time_limit,
    disable_all,
    server,
    **kwargs,
):
    """Reduce INPUT (an MPS file, gzip accepted, or the literal 'random')."""
    client = _Client(server)
    payload = _input_payload(input_path, seed, rand_rows, rand_cols)
    payload["config"] = _config_payload(max_rounds, strong_dual, time_limit, disable_all, kwargs)
    payload["solve_reduced"] = bool(oracle)
    res = client.post("/v1/presolve", payload)

    status = res["status"]
    report = _report_from_model(res["report"])
    rendered = report.to_kv() if report_format == "kv" else report.to_text()
    if report_out:
        # written without the wall-time line so repeat runs are byte-identical
        Path(report_out).write_bytes(rendered.encode("ascii"))
    else:
        click.echo(rendered, nl=False)
    click.echo(f"time: {report.total_time * 1000.0:.3f} ms")

    if out:
        Path(out).write_bytes(res["reduced_mps"].encode("latin-1"))
    if journal_path:
        Path(journal_path).write_bytes(base64.b64decode(res["journal_b64"]))

    if solution_path and status in ("solved_completely", "reduced", "unchanged"):
        reduced_solution = res.get("reduced_solution")
        if status == "solved_completely" and reduced_solution is None:
            reduced_solution = {"x": [], "y": [], "z": [], "status": "optimal"}
        if reduced_solution is None:
            click.echo(
                "no reduced solution available (pass --oracle, and mind the size cap)",
                err=True,
            )
        elif reduced_solution["status"] != "optimal":
            click.echo(f"reduced problem: {reduced_solution['status']}", err=True)
        else:
            post_res = client.post(
                "/v1/postsolve",
                {"journal_b64": res["journal_b64"], "solution": reduced_solution},
            )
            original = _solution_from_model(post_res["solution"])
            Path(solution_path).write_bytes(write_solution(original))

    sys.exit(_STATUS_EXIT.get(status, 1))


@main.command("postsolve")
@click.argument("journal_path", metavar="JOURNAL", type=click.Path())
@click.argument("solution_path", metavar="SOLUTION", type=click.Path())
@click.option("--original", "original_path", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--tol", default=1e-6, show_default=True)
@_server_option
def cmd_postsolve(journal_path, solution_path, original_path, out, tol, server):
    """Map a reduced-space solution file back through JOURNAL."""
    client = _Client(server)
    try:
        reduced = read_solution(Path(solution_path).read_bytes())
        journal_bytes = Path(journal_path).read_bytes()
    except (OSError, SolutionFormatError) as exc:
        raise click.ClickException(str(exc)) from exc
    payload = {
        "journal_b64": base64.b64encode(journal_bytes).decode("ascii"),
        "solution": _solution_payload(reduced),
        "tol": tol,
    }
    if original_path:
        try:
            data = Path(original_path).read_bytes()
        except OSError as exc:
            raise click.ClickException(str(exc)) from exc
        if data[:2] == b"\x1f\x8b":
            import gzip

            data = gzip.decompress(data)
        payload["original_mps"] = data.decode("latin-1")
    res = client.post("/v1/postsolve", payload)
    solution = _solution_from_model(res["solution"])
    if out:
        Path(out).write_bytes(write_solution(solution))
    else:
        click.echo(write_solution(solution).decode("ascii"), nl=False)
    if res.get("objective") is not None:
        click.echo(f"objective: {res['objective']:.17g}")
    if res.get("kkt") is not None:
        _print_kkt(res["kkt"])
    sys.exit(0)


@main.command("roundtrip")
@click.argument("input_path", metavar="INPUT")
@click.option("--tol", default=1e-6, show_default=True)
@_random_options
@_config_options
@_server_option
def cmd_roundtrip(
    input_path,
    tol,
    seed,
    rand_rows,
    rand_cols,
    max_rounds,
    strong_dual,
    time_limit,
    disable_all,
    server,
    **kwargs,
):
    """Presolve INPUT, solve the reduction, postsolve, and verify."""
    client = _Client(server)
    payload = _input_payload(input_path, seed, rand_rows, rand_cols)
    payload["config"] = _config_payload(max_rounds, strong_dual, time_limit, disable_all, kwargs)
    payload["tol"] = tol
    res = client.post("/v1/roundtrip", payload)
    status = res["status"]
    click.echo(f"roundtrip: {status}")
    if status == "infeasible":
        sys.exit(2)
    if status == "unbounded":
        sys.exit(3)
    if status == "cap_exceeded":
        click.echo("reduced problem exceeds the reference solver size cap", err=True)
        sys.exit(5)
    _print_kkt(res["kkt"])
    click.echo(f"objective (reduced): {res['objective_reduced']:.17g}")
    click.echo(f"objective (original): {res['objective_original']:.17g}")
    sys.exit(0 if res["passed"] else 1)


@main.command("bench")
@click.argument("directory", type=click.Path(file_okay=False))
@_config_options
@_server_option
def cmd_bench(directory, max_rounds, strong_dual, time_limit, disable_all, server, **kwargs):
    """Presolve every *.mps / *.mps.gz under DIRECTORY and summarize."""
    client = _Client(server)
    config = _config_payload(max_rounds, strong_dual, time_limit, disable_all, kwargs)
    root = Path(directory)
    if not root.is_dir():
        raise click.ClickException(f"not a directory: {directory}")
    paths = sorted(p for p in root.iterdir() if p.name.endswith((".mps", ".mps.gz")))
    times = []
    ratios = []
    failures = 0
    for path in paths:
        payload = _input_payload(str(path), 0, 0, 0)
        payload["config"] = config
        try:
            res = client.post("/v1/presolve", payload)
        except click.ClickException as exc:
            click.echo(f"{path.name}: FAILED ({exc.message})", err=True)
            failures += 1
            continue
        report = res["report"]
        times.append(report["total_time_seconds"])
        ratios.append(report["nnz_ratio"])
        click.echo(
            f"{path.name}: {res['status']} ratio {report['nnz_ratio']:.4f} "
            f"time {report['total_time_seconds'] * 1000.0:.3f} ms"
        )
    click.echo(f"instances: {len(times)} ok, {failures} failed")
    if times:
        # a clocked time of exactly zero would blow up the unshifted mean
        gm = geometric_mean(times) if min(times) > 0.0 else 0.0
        click.echo(f"mean nnz ratio: {arithmetic_mean(ratios):.4f}")
        click.echo(
            "presolve seconds: "
            f"AM {arithmetic_mean(times):.6f} "
            f"GM {gm:.6f} "
            f"SGM1 {shifted_geometric_mean(times, 1.0):.6f} "
            f"SGM10 {shifted_geometric_mean(times, 10.0):.6f}"
        )
    sys.exit(0)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def cmd_serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
