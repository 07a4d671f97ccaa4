"""Base classes for spectral verification."""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, ConfigDict, Field

from isofactor.spectral.grid import FloatArray

if TYPE_CHECKING:
    from .context import VerificationContext

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    """A single measured quantity compared with its tolerance."""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    value: float
    tolerance: float
    passed: bool = Field(alias="pass")
    category: str = ""
    message: str | None = None

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: {self.value:.6g} (tol {self.tolerance:.3g})"
        return f"{text} - {self.message}" if self.message else text


class SpectraRecord(BaseModel):
    computed: list[float] = []
    predicted: list[float] = []


@dataclass
class SampleTable:
    """Named columns sampled on one grid, in output order."""

    columns: dict[str, FloatArray] = field(default_factory=dict)

    def add(self, name: str, values: FloatArray) -> None:
        self.columns[name] = values

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0


class VerificationReport(BaseModel):
    """Outcome of running the enabled checks against one construction."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: dict[str, Any] = {}
    family: dict[str, Any] = {}
    checks: list[CheckResult] = []
    spectra: SpectraRecord = Field(default_factory=SpectraRecord)
    samples: SampleTable | None = Field(default=None, exclude=True)

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed_count(self) -> int:
        return len(self.checks) - len(self.failed)

    @property
    def has_failures(self) -> bool:
        return bool(self.failed)

    def add_result(
        self,
        name: str,
        value: float,
        tolerance: float,
        category: str = "",
        message: str | None = None,
        passed: bool | None = None,
    ) -> CheckResult:
        """Record a measurement; it passes when ``value <= tolerance`` unless ``passed`` is given."""
        if passed is None:
            passed = math.isfinite(value) and value <= tolerance
        result = CheckResult(
            name=name, value=value, tolerance=tolerance, passed=passed, category=category, message=message
        )
        self.checks.append(result)
        logger.debug(
            "Recorded %s = %.6g (tol %.3g): %s",
            name,
            value,
            tolerance,
            "pass" if passed else "fail",
            extra={"check": name, "category": category, "passed": passed},
        )
        return result


class Check(ABC):
    """Abstract base class for verification checks."""

    def __init__(self, enabled: bool = True, tolerance: float | None = None):
        self.enabled = enabled
        self.tolerance = tolerance if tolerance is not None else self.default_tolerance
        logger.debug("Initialized check %s: enabled=%s, tolerance=%g", self.check_id, enabled, self.tolerance)

    @property
    @abstractmethod
    def check_id(self) -> str:
        """Unique identifier, also the key of its tolerance in the configuration."""

    @property
    @abstractmethod
    def description(self) -> str:
        """Human-readable description of what this check measures."""

    @property
    @abstractmethod
    def category(self) -> str:
        """Theme of the check (operators, spectrum, states, oracle)."""

    @property
    def default_tolerance(self) -> float:
        return 1e-6

    @abstractmethod
    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        """
        Measure the quantity and record it in the report.

        Args:
            context: Construction under test with lazily computed spectra
            report: Report to add results to
        """

    def is_applicable(self, _context: VerificationContext) -> bool:
        """By default every check applies. Override for construction-specific checks."""
        return True

    def record(
        self,
        report: VerificationReport,
        value: float,
        suffix: str = "",
        message: str | None = None,
        passed: bool | None = None,
    ) -> CheckResult:
        """Add a result under this check's id and tolerance."""
        name = f"{self.check_id}.{suffix}" if suffix else self.check_id
        return report.add_result(name, value, self.tolerance, self.category, message, passed)

    def __str__(self) -> str:
        return f"{self.check_id}: {self.description}"
