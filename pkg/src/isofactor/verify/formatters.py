"""Output formatters for verification reports."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from typing import Any

from .base import SampleTable, VerificationReport

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


def _round(value: float) -> float | None:
    """Fixed precision for reproducible reports; non-finite values become ``null``."""
    if not math.isfinite(value):
        return None
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def _normalize(data: Any) -> Any:
    if isinstance(data, float):
        return _round(data)
    if isinstance(data, dict):
        return {key: _normalize(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_normalize(item) for item in data]
    return data


class BaseFormatter:
    """Base class for output formatters."""

    extension = "txt"

    def format(self, report: VerificationReport, **_kwargs: Any) -> str:
        """Format a verification report."""
        raise NotImplementedError


class JSONFormatter(BaseFormatter):
    """JSON report: parameters, family data, checks and spectra.

    Two runs of the same configuration produce byte-identical output.
    """

    extension = "json"

    def format(self, report: VerificationReport, **_kwargs: Any) -> str:
        logger.debug("Formatting %d check results as JSON", len(report.checks))
        output = {
            "config": report.config,
            "family": report.family,
            "checks": [
                {"name": c.name, "value": c.value, "tolerance": c.tolerance, "pass": c.passed}
                for c in report.checks
            ],
            "spectra": {"computed": report.spectra.computed, "predicted": report.spectra.predicted},
        }
        return json.dumps(_normalize(output), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


class CSVFormatter(BaseFormatter):
    """Sampled columns with a header row, comma separated, ``.`` decimal point."""

    extension = "csv"

    def format(self, report: VerificationReport, **_kwargs: Any) -> str:
        table = report.samples or SampleTable()
        logger.debug("Formatting %d rows x %d columns as CSV", table.n_rows, len(table.columns))
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        names = list(table.columns)
        writer.writerow(names)
        for row in zip(*(table.columns[name] for name in names), strict=True):
            writer.writerow(f"{float(v):.{SIGNIFICANT_DIGITS}g}" for v in row)
        return buffer.getvalue()


class GnuplotFormatter(BaseFormatter):
    """Gnuplot script that reads the CSV written next to it."""

    extension = "gp"

    def format(self, report: VerificationReport, **kwargs: Any) -> str:
        csv_name = kwargs.get("csv_name", "family.csv")
        title = str(report.family.get("label", "isofactor"))
        columns = list(report.samples.columns) if report.samples else ["x", "V", "V_transformed", "missing_state"]
        states = [name for name in columns if name.startswith("psi_")]
        lines = [
            "# generated by isofactor",
            "set datafile separator ','",
            "set key outside right",
            f"set title '{title}'",
            "set xlabel 'x'",
            "set multiplot layout 1,2",
            "set ylabel 'potential'",
            f"plot '{csv_name}' using 1:2 with lines title 'V', \\",
            f"     '{csv_name}' using 1:3 with lines title 'V transformed'",
            "set ylabel 'state'",
        ]
        curves = [f"'{csv_name}' using 1:4 with lines title 'missing state'"]
        for name in states:
            index = columns.index(name) + 1
            curves.append(f"'{csv_name}' using 1:{index} with lines title '{name}'")
        lines.append("plot " + ", \\\n     ".join(curves))
        lines.append("unset multiplot")
        return "\n".join(lines) + "\n"


class FormatterRegistry:
    """Registry for output formatters."""

    def __init__(self) -> None:
        self._formatters: dict[str, BaseFormatter] = {
            "json": JSONFormatter(),
            "csv": CSVFormatter(),
            "gnuplot": GnuplotFormatter(),
        }

    def get_formatter(self, format_name: str) -> BaseFormatter | None:
        """Get formatter by name."""
        return self._formatters.get(format_name.lower())

    def list_formats(self) -> list[str]:
        """List available formats."""
        return list(self._formatters.keys())

    def register_formatter(self, name: str, formatter: BaseFormatter) -> None:
        """Register a custom formatter."""
        self._formatters[name.lower()] = formatter


# Global formatter registry
formatter_registry = FormatterRegistry()
