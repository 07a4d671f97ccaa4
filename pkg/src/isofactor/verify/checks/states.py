"""Checks on mapped eigenfunctions, missing states and the hydrogen l-ladder."""

from __future__ import annotations

import logging

from isofactor.spectral.eigensolve import rayleigh_quotient
from isofactor.spectral.factorize import LadderContext, LadderDirection, hydrogen_ladder, ladder_closure
from isofactor.spectral.families import System
from isofactor.verify.base import Check, VerificationReport
from isofactor.verify.context import VerificationContext

logger = logging.getLogger(__name__)

ORTHOGONALITY_STATES = 5
LADDER_STATES = 3


class OrthogonalityCheck(Check):
    """The normalizable missing state is orthogonal to every mapped eigenfunction."""

    @property
    def check_id(self) -> str:
        return "orthogonality"

    @property
    def description(self) -> str:
        return "Missing state is orthogonal to the mapped eigenfunctions"

    @property
    def category(self) -> str:
        return "states"

    @property
    def default_tolerance(self) -> float:
        return 1e-4

    def is_applicable(self, context: VerificationContext) -> bool:
        return context.transform is not None and context.transform.adds_level and bool(context.mapped)

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        assert context.transform is not None
        missing = context.transform.missing.function
        overlaps = [abs(missing.inner(m.image)) for m in context.mapped[:ORTHOGONALITY_STATES]]
        self.record(report, max(overlaps))


class MappedStatesCheck(Check):
    """Mapped eigenfunctions are eigenfunctions of the target at the source energy."""

    @property
    def check_id(self) -> str:
        return "mapped_states"

    @property
    def description(self) -> str:
        return "Rayleigh quotients of mapped states reproduce the source energies"

    @property
    def category(self) -> str:
        return "states"

    @property
    def default_tolerance(self) -> float:
        return 1e-3

    def is_applicable(self, context: VerificationContext) -> bool:
        return bool(context.transform is not None and context.mapped)

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        target = context.target_potential
        worst = 0.0
        for mapped in context.mapped:
            rq = rayleigh_quotient(target, mapped.image)
            worst = max(worst, abs(rq - mapped.energy) / max(1.0, abs(mapped.energy)))
        self.record(report, worst)


def _excited(context: VerificationContext) -> list[tuple[float, int]]:
    energies = context.source_pairs[0]
    return [(energies[k], k) for k in range(1, min(LADDER_STATES + 1, len(energies)))]


class LadderClosureCheck(Check):
    """Raising then lowering in ``l`` returns the input state (cosine similarity)."""

    @property
    def check_id(self) -> str:
        return "ladder"

    @property
    def description(self) -> str:
        return "Hydrogen l-ladder round trip reproduces the state"

    @property
    def category(self) -> str:
        return "states"

    def is_applicable(self, context: VerificationContext) -> bool:
        return context.config.system is System.HYDROGEN and len(context.source_pairs[0]) > 1

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        l = context.config.l
        states = context.source_pairs[1]
        worst = max(1.0 - ladder_closure(l, states[k], energy) for energy, k in _excited(context))
        self.record(report, worst)


class LadderRayleighCheck(Check):
    """Ladder images keep their energy in the neighbouring sector."""

    @property
    def check_id(self) -> str:
        return "ladder_rayleigh"

    @property
    def description(self) -> str:
        return "Raised and lowered hydrogen states have the source energy"

    @property
    def category(self) -> str:
        return "states"

    @property
    def default_tolerance(self) -> float:
        return 1e-4

    def is_applicable(self, context: VerificationContext) -> bool:
        return context.config.system is System.HYDROGEN

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        l = context.config.l
        energies, states = context.source_pairs
        errors: list[float] = []
        for energy, k in _excited(context):
            raised = hydrogen_ladder(LadderContext(l, LadderDirection.RAISE_L), states[k], energy)
            if raised.rayleigh_quotient is not None:
                errors.append(abs(raised.rayleigh_quotient - energy))
        lowered = hydrogen_ladder(LadderContext(l, LadderDirection.LOWER_L), states[0], energies[0])
        if lowered.rayleigh_quotient is not None:
            errors.append(abs(lowered.rayleigh_quotient - energies[0]))
        self.record(report, max(errors, default=0.0))
