"""Tests for the verification engine and its checks."""

import math

import pytest

from isofactor.exceptions import DomainValidationError, ParameterError
from isofactor.verify import context as context_module
from isofactor.verify.base import Check
from isofactor.verify.checks import default_checks
from isofactor.verify.config import RunConfig
from isofactor.verify.context import VerificationContext, build_construction
from isofactor.verify.engine import VerifyEngine


def _engine(**settings) -> VerifyEngine:
    engine = VerifyEngine(RunConfig(**settings))
    engine.register_checks(default_checks())
    return engine


class ExplodingCheck(Check):
    @property
    def check_id(self) -> str:
        return "exploding"

    @property
    def description(self) -> str:
        return "Always raises"

    @property
    def category(self) -> str:
        return "operators"

    def run(self, context, report):
        raise RuntimeError("boom")


@pytest.fixture(scope="module")
def sdih_context():
    return VerificationContext(RunConfig(scheme="sdih", levels=4))


def test_sdih_oscillator_passes(sdih_context):
    """Test that x^2 -> x^2 + 2 passes every applicable check."""
    engine = _engine(scheme="sdih", levels=4)
    report = engine.run(sdih_context)
    assert report.checks
    assert not report.failed, [str(c) for c in report.failed]
    assert not engine.should_fail(report)
    names = {c.name for c in report.checks}
    assert {"riccati_residual", "isospectral", "analytic_spectrum", "oracle_agreement", "node_count"} <= names
    # hydrogen-only checks do not apply
    assert not any(name.startswith("ladder") for name in names)


def test_report_spectra_and_samples(sdih_context):
    """Test that the report carries spectra and the sampled columns."""
    report = _engine(scheme="sdih", levels=4).run(sdih_context)
    assert len(report.spectra.computed) == 4
    assert report.spectra.predicted == [3.0, 5.0, 7.0, 9.0]
    assert report.samples is not None
    assert list(report.samples.columns)[:4] == ["x", "V", "V_transformed", "missing_state"]
    # the level 1 has no image, so levels 3, 5, 7 map to psi_0..psi_2
    assert [name for name in report.samples.columns if name.startswith("psi_")] == ["psi_0", "psi_1", "psi_2"]
    assert report.samples.n_rows == 4001
    assert report.family["missing_state_normalizable"] is False
    assert "out_dir" not in report.config


def test_disabled_checks_are_skipped(sdih_context):
    """Test switching checks off through the configuration and at runtime."""
    engine = _engine(scheme="sdih", levels=4, checks={"commutator": False}, categories={"oracle": False})
    assert not engine.get_check("commutator").enabled
    assert not engine.get_check("node_count").enabled
    assert engine.configure_check("isospectral", False)
    assert not engine.configure_check("unknown", True)

    names = {c.name.split(".")[0] for c in engine.run(sdih_context).checks}
    assert not names & {"commutator", "node_count", "oracle_agreement", "isospectral"}


def test_configured_tolerance():
    """Test that configured and spectral tolerances reach the checks."""
    engine = _engine(checks={"intertwining": {"tolerance": 5e-3}}, tol=4e-3)
    assert engine.get_check("intertwining").tolerance == 5e-3
    assert engine.get_check("isospectral").tolerance == 4e-3
    assert engine.get_check("commutator").tolerance == 1e-5


def test_raising_check_is_recorded_as_failure(sdih_context):
    """Test that an exception inside a check becomes a failed result."""
    engine = VerifyEngine(RunConfig(scheme="sdih", levels=4))
    engine.register_check(ExplodingCheck())
    report = engine.run(sdih_context)
    assert len(report.checks) == 1
    result = report.checks[0]
    assert not result.passed
    assert math.isnan(result.value)
    assert "Check execution failed: boom" in result.message
    assert engine.should_fail(report)


def test_perturbed_beta_fails():
    """Test the negative control: a shifted beta breaks the Riccati equation."""
    config = RunConfig(scheme="sdih", levels=3, perturb_beta=0.01)
    engine = _engine(scheme="sdih", levels=3, perturb_beta=0.01)
    report = engine.run(VerificationContext(config))
    failed = {c.name for c in report.failed}
    assert "riccati_residual" in failed
    assert engine.should_fail(report)


def test_chain_context():
    """Test the chain description and its per-step factorizations."""
    context = VerificationContext(RunConfig(scheme="chain", epsilons=[-1.0, -3.0], levels=5))
    described = context.describe()
    assert described["label"] == "oscillator chain"
    assert described["epsilons"] == [-1.0, -3.0]
    assert described["missing_state_normalizable"] == [True, True]
    steps = context.factorizations()
    assert [step.label for step in steps] == ["step1", "step2"]
    assert context.predicted == [-3.0, -1.0, 1.0, 3.0, 5.0]


@pytest.mark.slow
@pytest.mark.parametrize(
    "settings",
    [
        {"scheme": "sdih", "levels": 5},
        {"scheme": "mielnik", "lambda_": 0.3, "levels": 3},
        {"scheme": "mielnik", "lambda_": -1.0, "levels": 3},
        {"scheme": "generalized", "k": 0, "lambda_": 0.0, "levels": 3},
    ],
    ids=["sdih", "mielnik-0.3", "mielnik-neg", "generalized"],
)
def test_hydrogen_families_pass(settings):
    """Test every check of l = 1 hydrogen families on the widened radial grid."""
    report = _engine(system="hydrogen", l=1, **settings).run()
    assert not report.has_failures, [str(c) for c in report.failed]
    results = {c.name: c for c in report.checks}
    assert not math.isnan(results["oracle_agreement"].value)
    assert "ladder" in results
    assert report.family["missing_state_normalizable"] is True
    assert report.spectra.predicted[0] == pytest.approx(-1.0)


def test_hydrogen_parameters_rejected_before_widening(monkeypatch):
    """Test that out-of-domain parameters fail without any grid work."""

    def no_widening(*_args, **_kwargs):
        raise AssertionError("grid widened before validation")

    monkeypatch.setattr(context_module, "widen_until_converged", no_widening)
    with pytest.raises(DomainValidationError):
        build_construction(RunConfig(system="hydrogen", scheme="mielnik", l=1, lambda_=0.1))
    with pytest.raises(DomainValidationError):
        build_construction(RunConfig(system="hydrogen", scheme="generalized", l=2, k=-1, lambda_=0.5))
    with pytest.raises(ParameterError):
        build_construction(RunConfig(system="hydrogen", scheme="generalized", l=1, k=-1, lambda_=2.0))
