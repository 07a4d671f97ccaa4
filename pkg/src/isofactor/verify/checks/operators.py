"""Checks on the factorization operators themselves."""

from __future__ import annotations

import logging

import numpy as np

from isofactor.spectral.darboux import map_eigenfunction
from isofactor.spectral.eigensolve import intertwine_residual
from isofactor.spectral.factorize import apply_hamiltonian, factorized_hamiltonian, oscillator_commutators
from isofactor.spectral.families import System
from isofactor.spectral.riccati import riccati_residual
from isofactor.verify.base import Check, VerificationReport
from isofactor.verify.context import VerificationContext

logger = logging.getLogger(__name__)

INTERTWINING_STATES = 3


class RiccatiResidualCheck(Check):
    """Max-norm Riccati residual of every superpotential, relative to ``max(1, max|V|)``."""

    @property
    def check_id(self) -> str:
        return "riccati_residual"

    @property
    def description(self) -> str:
        return "Superpotentials solve their Riccati equation against the factorized potential"

    @property
    def category(self) -> str:
        return "operators"

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        for step in context.factorizations():
            residual = riccati_residual(step.scheme.beta, step.source, context.grid, step.scheme.ordering)
            scale = max(1.0, float(np.max(np.abs(step.source.unscaled()))))
            worst = float(np.max(np.abs(residual.values))) / scale
            logger.debug("Riccati residual %s: %.3g", step.label or "transform", worst)
            self.record(report, worst, step.label)


class CommutatorCheck(Check):
    """``[a, a+] = 2`` and ``[H, a+] = 2 a+`` applied to the oscillator ground state."""

    @property
    def check_id(self) -> str:
        return "commutator"

    @property
    def description(self) -> str:
        return "Oscillator ladder commutation rules hold on the grid"

    @property
    def category(self) -> str:
        return "operators"

    @property
    def default_tolerance(self) -> float:
        return 1e-5

    def is_applicable(self, context: VerificationContext) -> bool:
        return context.config.system is System.OSCILLATOR

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        ground = context.source_pairs[1][0]
        number, hamiltonian = oscillator_commutators(ground)
        self.record(report, number, "annihilation_creation")
        self.record(report, hamiltonian, "hamiltonian_creation")


class FactorizationIdentityCheck(Check):
    """``(A+A + eps) f`` against ``H f`` for both partners, relative to ``||H f||``."""

    @property
    def check_id(self) -> str:
        return "factorization"

    @property
    def description(self) -> str:
        return "Operator products reproduce the source and target Hamiltonians"

    @property
    def category(self) -> str:
        return "operators"

    @property
    def default_tolerance(self) -> float:
        return 1e-3

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        for step in context.factorizations():
            _, states = context.step_pairs(step)
            f = states[0]
            for partner, potential in ((False, step.source), (True, step.target)):
                expected = apply_hamiltonian(potential, f)
                got = factorized_hamiltonian(step.scheme, f, partner=partner)
                error = (got - expected).norm() / max(expected.norm(), 1e-300)
                suffix = ".".join(s for s in (step.label, "target" if partner else "source") if s)
                self.record(report, error, suffix)


class InnerProductCheck(Check):
    """``||L psi||^2 = (E - eps) ||psi||^2`` for mapped source states."""

    @property
    def check_id(self) -> str:
        return "inner_product"

    @property
    def description(self) -> str:
        return "Intertwiner norms match the energy gap above the factorization energy"

    @property
    def category(self) -> str:
        return "operators"

    @property
    def default_tolerance(self) -> float:
        return 1e-4

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        gap_floor = context.config.spectrum_tolerance()
        for step in context.factorizations():
            worst = 0.0
            for energy, psi in zip(*context.step_pairs(step), strict=True):
                gap = energy - step.scheme.epsilon
                if gap <= gap_floor:
                    continue
                image = map_eigenfunction(step.scheme, psi, energy, renormalize=False)
                worst = max(worst, abs(image.norm() ** 2 / psi.norm() ** 2 - 1.0))
            self.record(report, worst, step.label)


class IntertwiningCheck(Check):
    """``||(H_target L - L H) psi|| / ||psi||`` for the lowest source eigenfunctions."""

    @property
    def check_id(self) -> str:
        return "intertwining"

    @property
    def description(self) -> str:
        return "The intertwiner carries source eigenfunctions to target eigenfunctions"

    @property
    def category(self) -> str:
        return "operators"

    @property
    def default_tolerance(self) -> float:
        return 1e-3

    def run(self, context: VerificationContext, report: VerificationReport) -> None:
        for step in context.factorizations():
            _, states = context.step_pairs(step)
            worst = max(
                intertwine_residual(step.source, step.target, step.scheme.beta, psi, step.scheme.ordering)
                for psi in states[:INTERTWINING_STATES]
            )
            self.record(report, worst, step.label)
