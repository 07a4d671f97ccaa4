"""Spectral verification checks."""

from isofactor.verify.base import Check

from .operators import (
    CommutatorCheck,
    FactorizationIdentityCheck,
    InnerProductCheck,
    IntertwiningCheck,
    RiccatiResidualCheck,
)
from .oracle import NodeCountCheck, OracleAgreementCheck
from .spectrum import AnalyticSpectrumCheck, IsospectralCheck, MissingStateCheck
from .states import LadderClosureCheck, LadderRayleighCheck, MappedStatesCheck, OrthogonalityCheck

__all__ = [
    "AnalyticSpectrumCheck",
    "CommutatorCheck",
    "FactorizationIdentityCheck",
    "InnerProductCheck",
    "IntertwiningCheck",
    "IsospectralCheck",
    "LadderClosureCheck",
    "LadderRayleighCheck",
    "MappedStatesCheck",
    "MissingStateCheck",
    "NodeCountCheck",
    "OracleAgreementCheck",
    "OrthogonalityCheck",
    "RiccatiResidualCheck",
    "default_checks",
]


def default_checks() -> list[Check]:
    """One instance of every check, in report order."""
    return [
        RiccatiResidualCheck(),
        CommutatorCheck(),
        FactorizationIdentityCheck(),
        InnerProductCheck(),
        IntertwiningCheck(),
        IsospectralCheck(),
        AnalyticSpectrumCheck(),
        MissingStateCheck(),
        OrthogonalityCheck(),
        MappedStatesCheck(),
        LadderClosureCheck(),
        LadderRayleighCheck(),
        OracleAgreementCheck(),
        NodeCountCheck(),
    ]
