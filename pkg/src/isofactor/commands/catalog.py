"""Catalog command: base factorizations and discrete seed energies."""

from __future__ import annotations

import logging

import typer
from rich.table import Table

from isofactor.exceptions import IsofactorError
from isofactor.spectral.families import analytic_levels
from isofactor.spectral.riccati import Ordering, PotentialSpec, particular_scheme
from isofactor.spectral.seeds import SQRT_PI_HALF, EnergyCatalog, mielnik_hydrogen_bound

from .common import console

logger = logging.getLogger(__name__)


def catalog(
    l_max: int = typer.Option(3, "--l-max", help="Largest hydrogen sector to list"),
    k_max: int = typer.Option(4, "--k-max", help="Largest oscillator seed index to list"),
) -> None:
    """Print the factorization catalog, seed energy catalogs and family bounds."""
    if l_max < 1 or k_max < 0:
        console.print("[bold red]error[/bold red]: --l-max must be >= 1 and --k-max >= 0")
        raise typer.Exit(2)

    specs = [PotentialSpec.oscillator(), PotentialSpec.oscillator_shifted()]
    specs += [PotentialSpec.hydrogen(l) for l in range(1, l_max + 1)]

    table = Table(title="Factorization catalog")
    table.add_column("Potential", style="cyan")
    table.add_column("beta", style="green")
    table.add_column("eps", justify="right")
    table.add_column("Product")
    table.add_column("Partner")
    table.add_column("Lowest levels", style="dim")
    try:
        for spec in specs:
            scheme = particular_scheme(spec)
            product = "A+A + eps" if scheme.ordering is Ordering.DAGGER_FIRST else "AA+ + eps"
            partner = "V + 2 beta'" if scheme.ordering is Ordering.DAGGER_FIRST else "V - 2 beta'"
            levels = ", ".join(f"{e:.6g}" for e in analytic_levels(spec, 3))
            table.add_row(spec.label, scheme.beta.descriptor, f"{scheme.epsilon:.6g}", product, partner, levels)
    except IsofactorError as e:
        console.print(f"[bold red]error[/bold red]: {e}")
        raise typer.Exit(e.exit_code) from e
    console.print(table)

    seeds = Table(title="Seed energies")
    seeds.add_column("System", style="cyan")
    seeds.add_column("k", justify="right")
    seeds.add_column("eps", justify="right", style="green")
    for k, eps in EnergyCatalog.oscillator(k_max).entries:
        seeds.add_row("oscillator", str(k), f"{eps:g}")
    for l in range(1, l_max + 1):
        for k, eps in EnergyCatalog.hydrogen(l).entries:
            seeds.add_row(f"hydrogen l={l}", str(k), f"{eps:.6g}")
    console.print(seeds)

    bounds = Table(title="Singularity-free domains")
    bounds.add_column("Family", style="cyan")
    bounds.add_column("Condition", style="green")
    bounds.add_row("mielnik oscillator", f"|gamma| > sqrt(pi)/2 = {SQRT_PI_HALF:.7f}")
    for l in range(1, l_max + 1):
        bounds.add_row(f"mielnik hydrogen l={l}", f"lambda > {mielnik_hydrogen_bound(l):.7g} or lambda < 0")
    bounds.add_row("generalized hydrogen", "lambda < 1 for |k| even, lambda > 1 for |k| odd")
    bounds.add_row("generalized oscillator", "|nu| < 1, eps < 1")
    console.print(bounds)
    logger.info("Printed catalog up to l=%d, k=%d", l_max, k_max)
