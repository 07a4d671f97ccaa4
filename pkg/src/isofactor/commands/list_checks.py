"""List available verification checks command."""

import logging

import typer
from rich.console import Console
from rich.table import Table

from isofactor.verify.checks import default_checks
from isofactor.verify.engine import VerifyEngine

from .common import CONFIG_OPTION, cli_errors

console = Console()
logger = logging.getLogger(__name__)


def list_checks(
    category: str = typer.Option(
        None,
        "--category",
        help="Filter checks by category (operators, spectrum, states, oracle)",
    ),
    enabled_only: bool = typer.Option(False, "--enabled-only", help="Show only enabled checks"),
    config: str | None = CONFIG_OPTION,
) -> None:
    """List all verification checks with their tolerances."""
    with cli_errors():
        engine = VerifyEngine(config)
    engine.register_checks(default_checks())
    checks = engine.list_checks()

    if category:
        checks = [check for check in checks if check.category.lower() == category.lower()]

    if enabled_only:
        checks = [check for check in checks if check.enabled]

    table = Table(title=f"Verification Checks{f' (Category: {category})' if category else ''}")
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Tolerance", style="yellow", no_wrap=True, justify="right")
    table.add_column("Category", style="green", no_wrap=True)
    table.add_column("Status", style="blue", no_wrap=True)
    table.add_column("Description", style="white")

    for check in checks:
        status = "✓ Enabled" if check.enabled else "✗ Disabled"
        status_style = "green" if check.enabled else "red"
        table.add_row(
            check.check_id,
            f"{check.tolerance:.1e}",
            check.category,
            f"[{status_style}]{status}[/{status_style}]",
            check.description,
        )

    console.print(table)

    total = len(checks)
    enabled = sum(1 for check in checks if check.enabled)
    console.print()
    console.print(
        f"[bold]Summary:[/bold] {total} checks total, "
        f"[green]{enabled} enabled[/green], "
        f"[red]{total - enabled} disabled[/red]"
    )

    if not category:
        categories = sorted({check.category for check in checks})
        console.print(f"[dim]Available categories: {', '.join(categories)}[/dim]")

    logger.info("Listed %d checks", total)
