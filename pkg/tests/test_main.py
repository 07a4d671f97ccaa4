"""Tests for main CLI functionality."""

from typer.testing import CliRunner

from isofactor.main import app

runner = CliRunner()


def test_version():
    """Test version command."""
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert "isofactor version:" in result.stdout


def test_help():
    """Test help command."""
    result = runner.invoke(app, ["--help"])
    assert result.exit_code == 0
    assert "Exactly solvable potentials by factorization" in result.stdout


def test_info_command():
    """Test info command."""
    result = runner.invoke(app, ["info"])
    assert result.exit_code == 0
    assert "isofactor Info" in result.stdout
    assert "sdih, mielnik, generalized, chain" in result.stdout


def test_unknown_command():
    """Test that an unknown command is a usage error."""
    result = runner.invoke(app, ["hello"])
    assert result.exit_code == 2
    assert "No such command" in result.output or "Usage" in result.output


def test_family_subcommand():
    """Test family subcommand exists."""
    result = runner.invoke(app, ["family", "--help"])
    assert result.exit_code == 0
    assert "--gamma" in result.stdout


def test_verify_subcommand():
    """Test verify subcommand exists."""
    result = runner.invoke(app, ["verify", "--help"])
    assert result.exit_code == 0
    assert "--perturb-beta" in result.stdout


def test_chain_subcommand():
    """Test chain subcommand exists."""
    result = runner.invoke(app, ["chain", "--help"])
    assert result.exit_code == 0
    assert "--epsilons" in result.stdout


def test_catalog_subcommand():
    """Test catalog subcommand exists."""
    result = runner.invoke(app, ["catalog", "--help"])
    assert result.exit_code == 0
    assert "--l-max" in result.stdout
