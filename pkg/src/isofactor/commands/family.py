"""Family command: build a transformed potential and write its data, report and plot script."""

from __future__ import annotations

import logging
from pathlib import Path

import typer

from .common import (
    CONFIG_OPTION,
    EPSILON_OPTION,
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


def family(
    system: str | None = SYSTEM_OPTION,
    scheme: str | None = SCHEME_OPTION,
    l: int | None = L_OPTION,
    k: int | None = K_OPTION,
    gamma: str | None = GAMMA_OPTION,
    lam: str | None = LAMBDA_OPTION,
    nu: str | None = NU_OPTION,
    epsilon: float | None = EPSILON_OPTION,
    levels: int | None = LEVELS_OPTION,
    grid_min: float | None = GRID_MIN_OPTION,
    grid_max: float | None = GRID_MAX_OPTION,
    grid_n: int | None = GRID_N_OPTION,
    tol: float | None = TOL_OPTION,
    out_dir: Path | None = OUT_DIR_OPTION,
    config: str | None = CONFIG_OPTION,
    workers: int | None = WORKERS_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Construct a partner potential (or a sweep of them) and write CSV, JSON and plot files.

    Exits 1 when a check of the accompanying report fails.
    """
    setup_logging(verbose)
    with cli_errors():
        overrides = collect_overrides(
            system, scheme, l, k, epsilon, None, levels, grid_min, grid_max, grid_n, tol, out_dir, workers
        )
        configs, swept = load_configs(config, overrides, {"gamma": gamma, "lambda": lam, "nu": nu})
        console.print(f"[bold green]Building {len(configs)} {configs[0].system.value} family member(s)...[/bold green]")
        reports = run_all(configs)

        for run_config, report in zip(configs, reports, strict=True):
            display_report(report)
            console.print(f"  [dim]levels:[/dim] {', '.join(f'{e:.6g}' for e in report.spectra.computed)}")
            for path in write_outputs(report, run_config, output_stem(run_config, swept)):
                console.print(f"  [dim]-->[/dim] {path}")
            console.print()

    display_summary(reports)
    logger.info("Family command finished for %d configuration(s)", len(configs))
    if any(report.has_failures for report in reports):
        raise typer.Exit(1)
