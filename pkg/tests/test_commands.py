"""End-to-end tests for the family, verify, chain, spectrum and helper commands."""

import json

import pytest
from typer.testing import CliRunner

from isofactor.commands.common import output_stem, parse_sweep
from isofactor.exceptions import ParameterError
from isofactor.main import app
from isofactor.verify.config import OUT_DIR_ENV, RunConfig

runner = CliRunner()


@pytest.fixture(autouse=True)
def _workdir(monkeypatch, tmp_path):
    monkeypatch.delenv(OUT_DIR_ENV, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / "out"


def test_parse_sweep():
    """Test single values and inclusive ranges."""
    assert parse_sweep("1.5") == [1.5]
    assert parse_sweep("2:3:0.5") == [2.0, 2.5, 3.0]
    assert parse_sweep("0.3:0.1:-0.1") == [0.3, 0.2, 0.1]
    with pytest.raises(ParameterError):
        parse_sweep("1:2")
    with pytest.raises(ParameterError):
        parse_sweep("2:1:0.5")
    with pytest.raises(ParameterError):
        parse_sweep("abc")


def test_output_stem():
    """Test file stems with and without a swept parameter."""
    config = RunConfig(gamma=2.5)
    assert output_stem(config) == "oscillator_mielnik"
    assert output_stem(config, "gamma") == "oscillator_mielnik_gamma2.5"


def test_family_writes_outputs(out_dir):
    """Test the mielnik oscillator at gamma = 2."""
    result = runner.invoke(app, ["family", "--gamma", "2", "--levels", "3", "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    for suffix in ("csv", "json", "gp"):
        assert (out_dir / f"oscillator_mielnik.{suffix}").exists()
    report = json.loads((out_dir / "oscillator_mielnik.json").read_text())
    assert report["config"]["gamma"] == 2.0
    assert all(check["pass"] for check in report["checks"])
    header = (out_dir / "oscillator_mielnik.csv").read_text().splitlines()[0]
    assert header.startswith("x,V,V_transformed,missing_state,psi_0")


def test_family_outputs_are_reproducible(tmp_path):
    """Test that two runs write byte-identical reports."""
    first, second = tmp_path / "a", tmp_path / "b"
    for target in (first, second):
        args = ["family", "--scheme", "sdih", "--levels", "3", "--out-dir", str(target)]
        assert runner.invoke(app, args).exit_code == 0
    name = "oscillator_sdih.json"
    assert (first / name).read_bytes() == (second / name).read_bytes()


def test_family_gamma_sweep(out_dir):
    """Test one set of files per swept value."""
    result = runner.invoke(app, ["family", "--gamma", "2:3:1", "--levels", "3", "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    assert (out_dir / "oscillator_mielnik_gamma2.json").exists()
    assert (out_dir / "oscillator_mielnik_gamma3.json").exists()


def test_family_outside_domain(out_dir):
    """Test |gamma| <= sqrt(pi)/2 exits with the domain error code."""
    result = runner.invoke(app, ["family", "--gamma", "0.5", "--out-dir", str(out_dir)])
    assert result.exit_code == 2
    assert not out_dir.exists()


def test_hydrogen_lambda_outside_domain(out_dir):
    """Test lambda in the excluded window for l = 1."""
    args = ["family", "--system", "hydrogen", "--scheme", "mielnik", "--l", "1", "--lambda", "0.1"]
    result = runner.invoke(app, [*args, "--out-dir", str(out_dir)])
    assert result.exit_code == 2


def test_invalid_configuration(out_dir):
    """Test that validation errors exit 2."""
    result = runner.invoke(app, ["family", "--levels", "0", "--out-dir", str(out_dir)])
    assert result.exit_code == 2
    result = runner.invoke(app, ["family", "--system", "morse"])
    assert result.exit_code == 2


def test_missing_config_file():
    """Test an explicit config path that does not exist."""
    result = runner.invoke(app, ["verify", "--config", "missing.cfg"])
    assert result.exit_code == 2


def test_verify_passes(out_dir):
    """Test the suite on the catalog oscillator partner."""
    result = runner.invoke(app, ["verify", "--scheme", "sdih", "--levels", "3", "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output


def test_verify_negative_control(out_dir):
    """Test that perturbing beta makes the suite fail."""
    args = ["verify", "--scheme", "sdih", "--levels", "3", "--perturb-beta", "0.01", "--out-dir", str(out_dir)]
    result = runner.invoke(app, args)
    assert result.exit_code == 1
    report = json.loads((out_dir / "oscillator_sdih.json").read_text())
    failed = {check["name"] for check in report["checks"] if not check["pass"]}
    assert "riccati_residual" in failed
    assert report["config"]["perturb_beta"] == 0.01


def test_verify_with_config_file(tmp_path, out_dir):
    """Test flags layered over a configuration file."""
    path = tmp_path / "run.cfg"
    path.write_text("scheme = sdih\nlevels = 3\noutputs.plot = false\n")
    result = runner.invoke(app, ["verify", "--config", str(path), "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    assert (out_dir / "oscillator_sdih.json").exists()
    assert not (out_dir / "oscillator_sdih.gp").exists()


def test_chain_command(out_dir):
    """Test the two-step chain at eps = -1, -3."""
    result = runner.invoke(app, ["chain", "--epsilons=-1,-3", "--levels", "5", "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    report = json.loads((out_dir / "oscillator_chain.json").read_text())
    assert report["spectra"]["predicted"] == [-3.0, -1.0, 1.0, 3.0, 5.0]
    assert report["family"]["epsilons"] == [-1.0, -3.0]


def test_chain_equal_energies(out_dir):
    """Test that equal consecutive energies are rejected."""
    result = runner.invoke(app, ["chain", "--epsilons=-1,-1", "--out-dir", str(out_dir)])
    assert result.exit_code == 2


def test_spectrum_command():
    """Test the level table for the catalog partner."""
    result = runner.invoke(app, ["spectrum", "--scheme", "sdih", "--levels", "3"])
    assert result.exit_code == 0, result.output
    assert "Spectrum" in result.stdout


def test_catalog_command():
    """Test the catalog tables."""
    result = runner.invoke(app, ["catalog", "--l-max", "2", "--k-max", "2"])
    assert result.exit_code == 0, result.output
    assert "Factorization catalog" in result.stdout
    assert "Seed energies" in result.stdout
    assert runner.invoke(app, ["catalog", "--l-max", "0"]).exit_code == 2


def test_init_config(tmp_path):
    """Test writing the default file and refusing to overwrite it."""
    result = runner.invoke(app, ["init-config"])
    assert result.exit_code == 0
    assert (tmp_path / "isofactor.cfg").exists()
    assert runner.invoke(app, ["init-config"]).exit_code == 1
    assert runner.invoke(app, ["init-config", "--force"]).exit_code == 0

    custom = tmp_path / "custom.cfg"
    assert runner.invoke(app, ["init-config", "-o", str(custom)]).exit_code == 0
    assert custom.read_text().startswith("# isofactor run configuration")


def test_list_checks():
    """Test listing a category of checks."""
    result = runner.invoke(app, ["list-checks", "--category", "spectrum"])
    assert result.exit_code == 0
    assert "3 checks total" in result.stdout


def test_list_checks_honours_config(tmp_path):
    """Test that disabled checks are filtered with --enabled-only."""
    path = tmp_path / "run.cfg"
    path.write_text("categories.oracle = false\n")
    result = runner.invoke(app, ["list-checks", "--enabled-only", "-c", str(path), "--category", "oracle"])
    assert result.exit_code == 0
    assert "0 checks total" in result.stdout


@pytest.mark.slow
def test_family_hydrogen_sdih(out_dir):
    """Test the l = 1 catalog partner on the widened radial grid."""
    args = ["family", "--system", "hydrogen", "--scheme", "sdih", "--l", "1", "--out-dir", str(out_dir)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    report = json.loads((out_dir / "hydrogen_sdih.json").read_text())
    assert all(check["pass"] for check in report["checks"])
    assert report["family"]["missing_state_normalizable"] is True
    assert report["spectra"]["predicted"][0] == -1.0


@pytest.mark.slow
def test_family_hydrogen_generalized(out_dir):
    """Test the seed at eps = -1 with lambda = 0."""
    args = ["family", "--system", "hydrogen", "--scheme", "generalized", "--l", "1", "--k", "0", "--lambda", "0"]
    result = runner.invoke(app, [*args, "--levels", "3", "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output


@pytest.mark.slow
def test_verify_hydrogen_mielnik(out_dir):
    """Test every check, the Numerov oracle included, for lambda = 0.3."""
    args = ["verify", "--system", "hydrogen", "--scheme", "mielnik", "--lambda", "0.3", "--levels", "3"]
    result = runner.invoke(app, [*args, "--out-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    report = json.loads((out_dir / "hydrogen_mielnik.json").read_text())
    oracle = next(check for check in report["checks"] if check["name"] == "oracle_agreement")
    assert oracle["value"] is not None
    assert oracle["pass"]


@pytest.mark.slow
def test_spectrum_hydrogen_mielnik_negative_lambda():
    """Test the level table for lambda < 0."""
    args = ["spectrum", "--system", "hydrogen", "--scheme", "mielnik", "--lambda=-1", "--levels", "3"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    assert "Spectrum" in result.stdout
