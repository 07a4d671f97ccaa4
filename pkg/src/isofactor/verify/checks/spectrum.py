"""Spectrum checks: target levels against source levels, analytic laws and missing states."""

from __future__ import annotations

import logging

from isofactor.spectral.eigensolve import (
    DEFAULT_LEVEL_CAP,
    SpectrumReport,
    build_hamiltonian,
    isospectral_report,
    lowest_eigenvalues,
    rayleigh_quotient,
)
from isofactor.verify.base import Check, VerificationReport
from isofactor.verify.context import VerificationContext

logger = logging.getLogger(__name__)


def _chain_prediction(context: VerificationContext) -> list[float]:
    """Numerical initial levels with every step's energy added or removed."""
    assert context.chain is not None
    m = context.levels
    count = m + context.chain.depth
    levels = lowest_eigenvalues(build_hamiltonian(context.chain.initial), count, cap=max(DEFAULT_LEVEL_CAP, count))
    tol = context.config.spectrum_tolerance()
    for step in context.factorizations():
        eps = step.scheme.epsilon
        if step.missing.square_integrable:
            levels = sorted([eps, *levels])
        else:
            levels = [e for e in levels if abs(e - eps) > tol]
    return levels[:m]


class IsospectralCheck(Check):
    """Target spectrum equals the numerical source spectrum with ``eps`` added (or removed)."""

    @property
    def check_id(self) -> str:
        return "isospectral"

    @property
    def description(self) -> str:
        return "Target levels match the source levels plus the new level"

    @property
    def category(self) -> str:
        return "spectrum"

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        if context.transform is not None:
            t = context.transform
            result = isospectral_report(
                t.source_potential, t.target_potential, t.epsilon, context.levels, self.tolerance, t.adds_level
            )
        else:
            result = SpectrumReport.compare(context.target_pairs[0], _chain_prediction(context), self.tolerance)
        self.record(report, result.max_abs_error, message=_levels_message(result))


class AnalyticSpectrumCheck(Check):
    """Target spectrum equals the closed-form law."""

    @property
    def check_id(self) -> str:
        return "analytic_spectrum"

    @property
    def description(self) -> str:
        return "Target levels match the analytic spectrum law"

    @property
    def category(self) -> str:
        return "spectrum"

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        result = SpectrumReport.compare(context.target_pairs[0], context.predicted, self.tolerance)
        self.record(report, result.max_abs_error, message=_levels_message(result))


class MissingStateCheck(Check):
    """A normalizable missing state has Rayleigh quotient ``eps``; otherwise ``eps`` is not a level."""

    @property
    def check_id(self) -> str:
        return "missing_state"

    @property
    def description(self) -> str:
        return "Missing states are eigenstates at eps exactly when they are normalizable"

    @property
    def category(self) -> str:
        return "spectrum"

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        for step in context.factorizations():
            eps = step.scheme.epsilon
            if step.missing.square_integrable:
                rq = rayleigh_quotient(step.target, step.missing.function)
                self.record(report, abs(rq - eps), step.label, message=f"Rayleigh quotient {rq:.8g}")
                continue
            levels = lowest_eigenvalues(build_hamiltonian(step.target), context.levels)
            distance = min(abs(e - eps) for e in levels)
            self.record(
                report,
                distance,
                step.label,
                message="not normalizable; distance of eps from the target levels",
                passed=distance > self.tolerance,
            )


def _levels_message(result: SpectrumReport) -> str:
    computed = ", ".join(f"{e:.6g}" for e in result.computed)
    predicted = ", ".join(f"{e:.6g}" for e in result.predicted)
    return f"computed [{computed}] vs predicted [{predicted}]"
