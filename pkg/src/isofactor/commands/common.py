"""Options and helpers shared by the family, spectrum, verify and chain commands."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import typer
from joblib import Parallel, delayed
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from isofactor.exceptions import IsofactorError, ParameterError
from isofactor.verify.base import VerificationReport
from isofactor.verify.checks import default_checks
from isofactor.verify.config import ConfigLoader, RunConfig
from isofactor.verify.engine import VerifyEngine
from isofactor.verify.formatters import formatter_registry

console = Console()
logger = logging.getLogger(__name__)

# Define typer options at module level to avoid B008
SYSTEM_OPTION = typer.Option(None, "--system", help="Base system: oscillator or hydrogen")
SCHEME_OPTION = typer.Option(None, "--scheme", help="Construction: sdih, mielnik, generalized or chain")
L_OPTION = typer.Option(None, "--l", help="Angular momentum of the hydrogen source sector (l >= 1)")
K_OPTION = typer.Option(None, "--k", help="Seed index (oscillator k >= 0, hydrogen k in 0..-(l-1))")
GAMMA_OPTION = typer.Option(None, "--gamma", help="Oscillator family parameter, or a sweep 'start:stop:step'")
LAMBDA_OPTION = typer.Option(None, "--lambda", help="Hydrogen family parameter, or a sweep 'start:stop:step'")
NU_OPTION = typer.Option(None, "--nu", help="Oscillator seed weight, or a sweep 'start:stop:step'")
EPSILON_OPTION = typer.Option(None, "--epsilon", help="Free seed energy of the generalized oscillator (< 1)")
EPSILONS_OPTION = typer.Option(None, "--epsilons", help="Comma-separated chain energies, e.g. '-1,-3'")
LEVELS_OPTION = typer.Option(None, "--levels", help="Number of levels to compute and compare")
GRID_MIN_OPTION = typer.Option(None, "--grid-min", help="Left end of the grid")
GRID_MAX_OPTION = typer.Option(None, "--grid-max", help="Right end of the grid")
GRID_N_OPTION = typer.Option(None, "--grid-n", help="Number of grid nodes")
TOL_OPTION = typer.Option(None, "--tol", help="Spectral tolerance (default 2e-3 oscillator, 5e-3 hydrogen)")
OUT_DIR_OPTION = typer.Option(None, "--out-dir", help="Output directory (default: $ISOFACTOR_OUT_DIR or isofactor-out)")
CONFIG_OPTION = typer.Option(None, "--config", "-c", help="Path to configuration file")
WORKERS_OPTION = typer.Option(None, "--workers", "-j", help="Parallel workers for parameter sweeps")
VERBOSE_OPTION = typer.Option(False, "--verbose", help="Enable debug logging")


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


@contextmanager
def cli_errors() -> Iterator[None]:
    """Print library and validation errors and exit with their code."""
    try:
        yield
    except IsofactorError as e:
        console.print(f"[bold red]error[/bold red]: {e}")
        raise typer.Exit(e.exit_code) from e
    except ValidationError as e:
        console.print(f"[bold red]invalid configuration[/bold red]: {e}")
        raise typer.Exit(2) from e
    except FileNotFoundError as e:
        console.print(f"[bold red]error[/bold red]: {e}")
        raise typer.Exit(2) from e


def parse_sweep(text: str) -> list[float]:
    """``"1.5"`` or ``"start:stop:step"`` (stop included when hit within rounding)."""
    parts = [p.strip() for p in str(text).split(":")]
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise ParameterError(f"Cannot parse parameter value '{text}'") from e
    if len(values) == 1:
        return values
    if len(values) != 3:
        raise ParameterError(f"A sweep is written 'start:stop:step', got '{text}'")
    start, stop, step = values
    if step == 0.0 or (stop - start) / step < 0:
        raise ParameterError(f"Sweep '{text}' never reaches its stop value")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(count)]


def collect_overrides(
    system: str | None = None,
    scheme: str | None = None,
    l: int | None = None,
    k: int | None = None,
    epsilon: float | None = None,
    epsilons: str | None = None,
    levels: int | None = None,
    grid_min: float | None = None,
    grid_max: float | None = None,
    grid_n: int | None = None,
    tol: float | None = None,
    out_dir: Path | None = None,
    workers: int | None = None,
    **extra: Any,
) -> dict[str, Any]:
    """Flag values as configuration keys; unset flags are left out."""
    overrides: dict[str, Any] = {
        "system": system,
        "scheme": scheme,
        "l": l,
        "k": k,
        "epsilon": epsilon,
        "epsilons": epsilons,
        "levels": levels,
        "tol": tol,
        "out_dir": out_dir,
        "workers": workers,
        "grid": {"x_min": grid_min, "x_max": grid_max, "n": grid_n},
        **extra,
    }
    return {key: value for key, value in overrides.items() if value is not None}


def load_configs(
    config_path: str | None, overrides: dict[str, Any], sweeps: dict[str, str | None]
) -> tuple[list[RunConfig], str | None]:
    """One configuration per swept value, and the name of the swept parameter.

    At most one of ``gamma``, ``lambda`` and ``nu`` may be a ``start:stop:step`` sweep.
    """
    swept = {key: parse_sweep(text) for key, text in sweeps.items() if text is not None}
    ranges = [key for key, values in swept.items() if len(values) > 1]
    if len(ranges) > 1:
        raise ParameterError(f"Only one parameter can be swept at a time, got {', '.join(ranges)}")
    fixed = {key: values[0] for key, values in swept.items() if len(values) == 1}
    base = ConfigLoader().load_config(config_path, {**overrides, **fixed})
    if not ranges:
        return [base], None
    key = ranges[0]
    field = "lambda_" if key == "lambda" else key
    return [base.model_copy(update={field: value}) for value in swept[key]], key


def run_verification(config: RunConfig) -> VerificationReport:
    """Build the construction, register every check and run them."""
    engine = VerifyEngine(config)
    engine.register_checks(default_checks())
    return engine.run()


def run_all(configs: list[RunConfig]) -> list[VerificationReport]:
    """Run every configuration, in parallel for sweeps; reports keep the parameter order."""
    if len(configs) == 1:
        return [run_verification(configs[0])]
    workers = configs[0].workers
    logger.info("Sweeping %d parameter values on %d workers", len(configs), workers)
    return list(Parallel(n_jobs=workers)(delayed(run_verification)(config) for config in configs))


def output_stem(config: RunConfig, swept: str | None = None) -> str:
    """``<system>_<scheme>``, suffixed with the swept parameter value."""
    stem = f"{config.system.value}_{config.scheme.value}"
    if swept is None:
        return stem
    value = config.lambda_ if swept == "lambda" else getattr(config, swept)
    return f"{stem}_{swept}{value:g}"


def write_outputs(report: VerificationReport, config: RunConfig, stem: str) -> list[Path]:
    """Write the artifacts enabled in ``config.outputs`` under ``config.out_dir``."""
    out_dir = config.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_name = f"{stem}.csv"
    wanted = [
        ("csv", config.outputs.csv, csv_name),
        ("json", config.outputs.json_report, f"{stem}.json"),
        ("gnuplot", config.outputs.plot, f"{stem}.gp"),
    ]
    written: list[Path] = []
    for format_name, enabled, filename in wanted:
        if not enabled:
            continue
        formatter = formatter_registry.get_formatter(format_name)
        if formatter is None:
            continue
        path = out_dir / filename
        path.write_text(formatter.format(report, csv_name=csv_name), encoding="utf-8")
        written.append(path)
        logger.info("Wrote %s", path, extra={"format": format_name})
    return written


def display_report(report: VerificationReport, title: str | None = None) -> None:
    """Table of check results with their tolerances."""
    table = Table(title=title or str(report.family.get("label", "verification")))
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Value", justify="right")
    table.add_column("Tolerance", justify="right", style="dim")
    table.add_column("Status", no_wrap=True)
    for result in report.checks:
        status = "[green]✓ pass[/green]" if result.passed else "[red]✗ FAIL[/red]"
        value = f"{result.value:.3e}" if math.isfinite(result.value) else "n/a"
        table.add_row(result.name, value, f"{result.tolerance:.1e}", status)
    console.print(table)
    for result in report.failed:
        if result.message:
            console.print(f"  [red]{result.name}[/red]: {result.message}")


def display_summary(reports: list[VerificationReport]) -> None:
    total = sum(len(r.checks) for r in reports)
    failed = sum(len(r.failed) for r in reports)
    if failed:
        console.print(f"  [bold red]{failed} failed[/bold red] of {total} checks")
    else:
        console.print(f"  [green]✓[/green] {total} checks passed")
