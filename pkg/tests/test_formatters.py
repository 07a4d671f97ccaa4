"""Tests for the JSON, CSV and gnuplot writers."""

import json
import math

import numpy as np
import pytest

from isofactor.verify.base import SampleTable, SpectraRecord, VerificationReport
from isofactor.verify.formatters import (
    BaseFormatter,
    CSVFormatter,
    FormatterRegistry,
    GnuplotFormatter,
    JSONFormatter,
)


@pytest.fixture
def report():
    report = VerificationReport(
        config={"system": "oscillator", "gamma": 2.0},
        family={"label": "mielnik x^2 gamma=2", "epsilon": 1.0},
        spectra=SpectraRecord(computed=[1.0000000000001234, 3.0], predicted=[1.0, 3.0]),
    )
    report.add_result("isospectral", 1.5e-4, 2e-3, "spectrum")
    report.add_result("oracle_agreement", math.nan, 1e-4, "oracle", message="Check execution failed: boom", passed=False)
    table = SampleTable()
    x = np.array([-1.0, 0.0, 1.0])
    table.add("x", x)
    table.add("V", x**2)
    table.add("V_transformed", x**2 + 2.0)
    table.add("missing_state", np.exp(0.5 * x**2))
    table.add("psi_0", np.exp(-0.5 * x**2))
    report.samples = table
    return report


class TestJSONFormatter:
    def test_structure(self, report):
        """Test the top-level keys and the check entries."""
        data = json.loads(JSONFormatter().format(report))
        assert set(data) == {"config", "family", "checks", "spectra"}
        assert data["checks"][0] == {"name": "isospectral", "value": 1.5e-4, "tolerance": 2e-3, "pass": True}
        assert data["spectra"]["predicted"] == [1.0, 3.0]

    def test_nan_becomes_null(self, report):
        """Test that a failed check with no value serializes as null."""
        data = json.loads(JSONFormatter().format(report))
        assert data["checks"][1]["value"] is None
        assert data["checks"][1]["pass"] is False

    def test_fixed_precision(self, report):
        """Test rounding to twelve significant digits."""
        data = json.loads(JSONFormatter().format(report))
        assert data["spectra"]["computed"][0] == 1.0

    def test_deterministic_with_trailing_newline(self, report):
        """Test byte-identical output for identical reports."""
        first = JSONFormatter().format(report)
        assert first == JSONFormatter().format(report)
        assert first.endswith("}\n")


class TestCSVFormatter:
    def test_header_and_rows(self, report):
        """Test one header row and one row per node."""
        lines = CSVFormatter().format(report).splitlines()
        assert lines[0] == "x,V,V_transformed,missing_state,psi_0"
        assert len(lines) == 4
        assert lines[2] == "0,0,2,1,1"
        assert lines[3].startswith("1,1,3,1.6487212707")

    def test_without_samples(self):
        """Test an empty table gives an empty header."""
        assert CSVFormatter().format(VerificationReport()) == "\n"


def test_gnuplot_references_csv(report):
    """Test that the script plots every state column of the named CSV."""
    script = GnuplotFormatter().format(report, csv_name="oscillator_mielnik.csv")
    assert "set datafile separator ','" in script
    assert "'oscillator_mielnik.csv' using 1:2" in script
    assert "using 1:5 with lines title 'psi_0'" in script
    assert "mielnik x^2 gamma=2" in script
    assert script.endswith("\n")


class TestFormatterRegistry:
    def test_builtin_formats(self):
        """Test the registered writers."""
        registry = FormatterRegistry()
        assert registry.list_formats() == ["json", "csv", "gnuplot"]
        assert isinstance(registry.get_formatter("JSON"), JSONFormatter)
        assert registry.get_formatter("xml") is None

    def test_register_formatter(self):
        """Test adding a custom writer."""

        class CountFormatter(BaseFormatter):
            extension = "txt"

            def format(self, report, **_kwargs):
                return f"{len(report.checks)}\n"

        registry = FormatterRegistry()
        registry.register_formatter("Count", CountFormatter())
        formatter = registry.get_formatter("count")
        assert formatter is not None
        assert formatter.format(VerificationReport()) == "0\n"
