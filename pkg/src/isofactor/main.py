"""Main CLI application entry point."""

import typer
from rich.console import Console
from rich.table import Table

from . import __version__
from .commands.catalog import catalog
from .commands.chain import chain
from .commands.family import family
from .commands.init_config import init_config
from .commands.list_checks import list_checks
from .commands.spectrum import spectrum
from .commands.verify import verify

app = typer.Typer(
    name="isofactor",
    help="Exactly solvable potentials by factorization, with numerical spectrum verification",
    add_completion=False,
)

app.command()(catalog)
app.command()(family)
app.command()(spectrum)
app.command()(verify)
app.command()(chain)
app.command(name="init-config")(init_config)
app.command(name="list-checks")(list_checks)

console = Console()


def version_callback(value: bool) -> None:
    """Show version and exit."""
    if value:
        console.print(f"isofactor version: {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
) -> None:
    """Build isospectral and partner potentials and check their spectra numerically."""
    pass


@app.command()
def info() -> None:
    """Show information about the CLI tool."""
    table = Table(title="isofactor Info")
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Version", __version__)
    table.add_row("Description", "Factorization-method potential families with spectral verification")
    table.add_row("Python Package", "isofactor")
    table.add_row("Systems", "oscillator, hydrogen")
    table.add_row("Schemes", "sdih, mielnik, generalized, chain")

    console.print(table)


if __name__ == "__main__":
    app()
