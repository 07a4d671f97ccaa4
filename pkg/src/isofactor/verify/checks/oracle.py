"""Cross-checks between the two numerical eigensolvers."""

from __future__ import annotations

import logging

from isofactor.spectral.eigensolve import count_nodes
from isofactor.verify.base import Check, VerificationReport
from isofactor.verify.context import VerificationContext

logger = logging.getLogger(__name__)


class OracleAgreementCheck(Check):
    """Finite-difference bisection levels against Numerov shooting."""

    @property
    def check_id(self) -> str:
        return "oracle_agreement"

    @property
    def description(self) -> str:
        return "Matrix and Numerov eigenvalues of the target agree"

    @property
    def category(self) -> str:
        return "oracle"

    @property
    def default_tolerance(self) -> float:
        return 1e-4

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        matrix = context.target_pairs[0]
        shooting = context.target_numerov
        worst = max(abs(a - b) for a, b in zip(matrix, shooting, strict=True))
        logger.debug("Oracle levels: matrix %s, Numerov %s", matrix, shooting)
        self.record(report, worst)


class NodeCountCheck(Check):
    """The k-th target eigenfunction has k nodes."""

    @property
    def check_id(self) -> str:
        return "node_count"

    @property
    def description(self) -> str:
        return "Target eigenfunctions obey the oscillation theorem"

    @property
    def category(self) -> str:
        return "oracle"

    @property
    def default_tolerance(self) -> float:
        return 0.0

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        wrong = [k for k, psi in enumerate(context.target_pairs[1]) if count_nodes(psi) != k]
        message = f"wrong node count for states {wrong}" if wrong else None
        self.record(report, float(len(wrong)), message=message)
