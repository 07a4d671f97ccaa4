"""Verify command: run the check suite and exit non-zero on any failure."""

from __future__ import annotations

import logging
from pathlib import Path

import typer

from .common import (
    CONFIG_OPTION,
    EPSILON_OPTION,
    EPSILONS_OPTION,
    GAMMA_OPTION,
    GRID_MAX_OPTION,
    GRID_MIN_OPTION,
    GRID_N_OPTION,
    K_OPTION,
    L_OPTION,
    LAMBDA_OPTION,
    LEVELS_OPTION,
    NU_OPTION,
    OUT_DIR_OPTION,
    SCHEME_OPTION,
    SYSTEM_OPTION,
    TOL_OPTION,
    VERBOSE_OPTION,
    WORKERS_OPTION,
    cli_errors,
    collect_overrides,
    console,
    display_report,
    display_summary,
    load_configs,
    output_stem,
    run_all,
    setup_logging,
    write_outputs,
)

logger = logging.getLogger(__name__)


def verify(
    system: str | None = SYSTEM_OPTION,
    scheme: str | None = SCHEME_OPTION,
    l: int | None = L_OPTION,
    k: int | None = K_OPTION,
    gamma: str | None = GAMMA_OPTION,
    lam: str | None = LAMBDA_OPTION,
    nu: str | None = NU_OPTION,
    epsilon: float | None = EPSILON_OPTION,
    epsilons: str | None = EPSILONS_OPTION,
    levels: int | None = LEVELS_OPTION,
    grid_min: float | None = GRID_MIN_OPTION,
    grid_max: float | None = GRID_MAX_OPTION,
    grid_n: int | None = GRID_N_OPTION,
    tol: float | None = TOL_OPTION,
    out_dir: Path | None = OUT_DIR_OPTION,
    config: str | None = CONFIG_OPTION,
    workers: int | None = WORKERS_OPTION,
    perturb_beta: float | None = typer.Option(
        None,
        "--perturb-beta",
        help="Add this constant to beta inside the checks (negative control)",
    ),
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Run the verification suite; exit 1 if any check fails."""
    setup_logging(verbose)
    with cli_errors():
        overrides = collect_overrides(
            system,
            scheme,
            l,
            k,
            epsilon,
            epsilons,
            levels,
            grid_min,
            grid_max,
            grid_n,
            tol,
            out_dir,
            workers,
            perturb_beta=perturb_beta,
        )
        configs, swept = load_configs(config, overrides, {"gamma": gamma, "lambda": lam, "nu": nu})
        console.print(f"[bold green]Verifying {len(configs)} construction(s)...[/bold green]")
        reports = run_all(configs)

        for run_config, report in zip(configs, reports, strict=True):
            display_report(report)
            for path in write_outputs(report, run_config, output_stem(run_config, swept)):
                console.print(f"  [dim]-->[/dim] {path}")
            console.print()

    display_summary(reports)
    if any(report.has_failures for report in reports):
        raise typer.Exit(1)
