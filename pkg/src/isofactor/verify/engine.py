"""Verification engine for processing constructed families."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any

from .base import Check, SpectraRecord, VerificationReport
from .config import ConfigLoader, RunConfig
from .context import VerificationContext

logger = logging.getLogger(__name__)


class VerifyEngine:
    """Engine for running spectral checks against one construction."""

    def __init__(self, config: RunConfig | str | Path | None = None, overrides: dict[str, Any] | None = None):
        """
        Initialize the verification engine.

        Args:
            config: Configuration object, path to config file, or None for auto-discovery
            overrides: Command-line values applied on top of the file
        """
        self.checks: dict[str, Check] = {}
        self.config_loader = ConfigLoader()

        if isinstance(config, RunConfig):
            self.config = config
            self.config_loader.config = config
        elif isinstance(config, (str, Path)):
            self.config = self.config_loader.load_config(config, overrides)
        else:
            self.config = self.config_loader.load_config(overrides=overrides)

        logger.info("Initialized verify engine with configuration")

    def register_check(self, check: Check) -> None:
        """
        Register a check with the engine.

        Args:
            check: Check instance to register
        """
        if check.check_id in self.checks:
            logger.warning("Check %s already registered, replacing with new instance", check.check_id)

        check.enabled = self.config_loader.is_check_enabled(check.check_id, check.category)
        check.tolerance = self.config.tolerance_for(check.check_id, check.default_tolerance)

        self.checks[check.check_id] = check
        logger.debug(
            "Registered check %s: %s (enabled=%s, tolerance=%g)",
            check.check_id,
            check.description,
            check.enabled,
            check.tolerance,
        )

    def register_checks(self, checks: list[Check]) -> None:
        for check in checks:
            self.register_check(check)

    def get_check(self, check_id: str) -> Check | None:
        return self.checks.get(check_id)

    def list_checks(self) -> list[Check]:
        return list(self.checks.values())

    def configure_check(self, check_id: str, enabled: bool, tolerance: float | None = None) -> bool:
        """
        Configure a check's enabled state and tolerance.

        Returns:
            True if the check was configured, False if it is not registered
        """
        check = self.checks.get(check_id)
        if not check:
            logger.warning("Attempted to configure unknown check: %s", check_id)
            return False

        old_enabled, old_tolerance = check.enabled, check.tolerance
        check.enabled = enabled
        if tolerance is not None:
            check.tolerance = tolerance

        logger.info(
            "Configured check %s: enabled %s->%s, tolerance %g->%g",
            check_id,
            old_enabled,
            enabled,
            old_tolerance,
            check.tolerance,
        )
        return True

    def context(self) -> VerificationContext:
        """Build the construction named by the configuration."""
        return VerificationContext(self.config)

    def run(self, context: VerificationContext | None = None) -> VerificationReport:
        """
        Run every enabled, applicable check.

        A check that raises is recorded as a failed result carrying the error.

        Args:
            context: Construction under test; built from the configuration when omitted

        Returns:
            Report with all results, spectra and the sampled columns
        """
        context = context or self.context()
        report = VerificationReport(config=self.config.report_dict(), family=context.describe())

        enabled_checks = [check for check in self.checks.values() if check.enabled]
        logger.debug("Running %d enabled checks", len(enabled_checks))

        for check in enabled_checks:
            try:
                if check.is_applicable(context):
                    logger.debug("Running check %s", check.check_id)
                    check.run(context, report)
                else:
                    logger.debug("Skipping check %s (not applicable)", check.check_id)
            except Exception as e:
                logger.error(
                    "Check %s failed with error: %s",
                    check.check_id,
                    e,
                    extra={"check_id": check.check_id, "family": context.describe().get("label")},
                )
                report.add_result(
                    check.check_id,
                    math.nan,
                    check.tolerance,
                    check.category,
                    message=f"Check execution failed: {e}",
                    passed=False,
                )

        report.spectra = self._spectra(context)
        try:
            report.samples = context.samples()
        except Exception as e:
            logger.error("Could not sample the construction: %s", e)

        logger.info(
            "Completed verification of %s: %d passed, %d failed",
            context.describe().get("label"),
            report.passed_count,
            len(report.failed),
        )
        return report

    def _spectra(self, context: VerificationContext) -> SpectraRecord:
        try:
            return SpectraRecord(computed=context.target_pairs[0], predicted=context.predicted)
        except Exception as e:
            logger.error("Could not compute spectra for the report: %s", e)
            return SpectraRecord()

    def should_fail(self, report: VerificationReport) -> bool:
        """Any failed check fails the run."""
        return report.has_failures
