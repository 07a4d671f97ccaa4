"""Spectrum command: levels of the source and target from both eigensolvers."""

from __future__ import annotations

import logging

from rich.table import Table

from isofactor.verify.context import VerificationContext

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
    SCHEME_OPTION,
    SYSTEM_OPTION,
    VERBOSE_OPTION,
    cli_errors,
    collect_overrides,
    console,
    load_configs,
    setup_logging,
)

logger = logging.getLogger(__name__)


def spectrum(
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
    config: str | None = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Print computed levels (bisection and Numerov) next to the analytic prediction."""
    setup_logging(verbose)
    with cli_errors():
        overrides = collect_overrides(
            system, scheme, l, k, epsilon, epsilons, levels, grid_min, grid_max, grid_n
        )
        configs, _ = load_configs(config, overrides, {"gamma": gamma, "lambda": lam, "nu": nu})
        for run_config in configs:
            context = VerificationContext(run_config)
            source, _ = context.source_pairs
            target, _ = context.target_pairs
            shooting = context.target_numerov
            predicted = context.predicted

            table = Table(title=f"Spectrum: {context.describe()['label']}")
            table.add_column("n", style="cyan", justify="right")
            table.add_column("Source", justify="right")
            table.add_column("Target (bisection)", justify="right", style="green")
            table.add_column("Target (Numerov)", justify="right", style="green")
            table.add_column("Analytic", justify="right", style="yellow")
            for n in range(len(target)):
                table.add_row(
                    str(n),
                    f"{source[n]:.8f}" if n < len(source) else "",
                    f"{target[n]:.8f}",
                    f"{shooting[n]:.8f}",
                    f"{predicted[n]:.8f}" if n < len(predicted) else "",
                )
            console.print(table)
            grid = context.grid
            console.print(f"  [dim]grid: [{grid.x_min:g}, {grid.x_max:g}], {grid.n_points} nodes[/dim]")

    logger.info("Printed spectra for %d configuration(s)", len(configs))
