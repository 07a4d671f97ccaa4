"""Chain command: iterate dagger-first factorizations of the oscillator."""

from __future__ import annotations

import logging
from pathlib import Path

import typer
from rich.table import Table

from isofactor.spectral.families import Scheme, System

from .common import (
    CONFIG_OPTION,
    EPSILONS_OPTION,
    GRID_MAX_OPTION,
    GRID_MIN_OPTION,
    GRID_N_OPTION,
    LEVELS_OPTION,
    OUT_DIR_OPTION,
    TOL_OPTION,
    VERBOSE_OPTION,
    cli_errors,
    collect_overrides,
    console,
    display_report,
    load_configs,
    output_stem,
    run_verification,
    setup_logging,
    write_outputs,
)

logger = logging.getLogger(__name__)


def chain(
    epsilons: str | None = EPSILONS_OPTION,
    levels: int | None = LEVELS_OPTION,
    grid_min: float | None = GRID_MIN_OPTION,
    grid_max: float | None = GRID_MAX_OPTION,
    grid_n: int | None = GRID_N_OPTION,
    tol: float | None = TOL_OPTION,
    out_dir: Path | None = OUT_DIR_OPTION,
    config: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Build an oscillator chain at the given energies, verify it and write its files."""
    setup_logging(verbose)
    with cli_errors():
        overrides = collect_overrides(
            System.OSCILLATOR.value,
            Scheme.CHAIN.value,
            epsilons=epsilons,
            levels=levels,
            grid_min=grid_min,
            grid_max=grid_max,
            grid_n=grid_n,
            tol=tol,
            out_dir=out_dir,
        )
        configs, _ = load_configs(config, overrides, {})
        run_config = configs[0]
        console.print(
            f"[bold green]Chaining {len(run_config.epsilons)} step(s) at eps = "
            f"{', '.join(f'{e:g}' for e in run_config.epsilons)}...[/bold green]"
        )
        report = run_verification(run_config)

        table = Table(title="Chain steps")
        table.add_column("Step", style="cyan", justify="right")
        table.add_column("eps", justify="right")
        table.add_column("Missing state", style="green")
        normalizable = report.family.get("missing_state_normalizable", [])
        for index, (eps, flag) in enumerate(zip(run_config.epsilons, normalizable, strict=False), start=1):
            table.add_row(str(index), f"{eps:g}", "normalizable (level added)" if flag else "not normalizable")
        console.print(table)

        display_report(report)
        console.print(f"  [dim]levels:[/dim] {', '.join(f'{e:.6g}' for e in report.spectra.computed)}")
        for path in write_outputs(report, run_config, output_stem(run_config)):
            console.print(f"  [dim]-->[/dim] {path}")

    if report.has_failures:
        raise typer.Exit(1)
