"""Spectral verification of constructed families."""

from .base import Check, CheckResult, VerificationReport
from .config import ConfigLoader, RunConfig
from .context import VerificationContext, build_construction
from .engine import VerifyEngine

__all__ = [
    "Check",
    "CheckResult",
    "ConfigLoader",
    "RunConfig",
    "VerificationContext",
    "VerificationReport",
    "VerifyEngine",
    "build_construction",
]
