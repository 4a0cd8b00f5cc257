import os
import subprocess
import sys

import pytest

from tests import PROJECT_ROOT


def run_cli(*args, timeout=120):
    """Executa ``src/main.py`` a partir da raiz do projeto."""
    env = dict(os.environ, LOG_LEVEL="WARNING")
    return subprocess.run(
        [sys.executable, 'src/main.py', *args],
        cwd=PROJECT_ROOT,
        capture_output=True,
        text=True,
        timeout=timeout,
        env=env,
    )


@pytest.mark.integration
class TestCommandLineInterface:
    """Testes para interface de linha de comando."""

    def test_main_help_option(self):
        """Testa opção de help do main.py."""
        result = run_cli('--help')
        assert result.returncode == 0
        assert 'usage:' in result.stdout.lower()
        assert 'cartan' in result.stdout

    def test_missing_subcommand(self):
        result = run_cli()
        assert result.returncode == 2

    def test_status_only_option(self):
        """Testa opção --status-only."""
        result = run_cli('--status-only')
        assert result.returncode == 0
        assert 'STATUS DO SISTEMA' in result.stdout
        assert 'cartan_tool' in result.stdout

    def test_cartan_command(self, matrix_file, tmp_path):
        out = tmp_path / "out"
        result = run_cli('cartan', str(matrix_file), '--out', str(out))

        assert result.returncode == 0, result.stderr
        assert (out / 'cartan.csv').exists()
        assert 'CONCLUÍDO' in result.stdout
        assert 'reconstruction_error' in result.stdout

    def test_missing_input_file(self, tmp_path):
        result = run_cli('cartan', str(tmp_path / 'nada.txt'), '--out', str(tmp_path))
        assert result.returncode == 2
        assert 'Arquivo não encontrado' in result.stderr

    def test_limitset_zero_length(self, tmp_path):
        result = run_cli('limitset', '--fixture', 'cyclic', '--max-len', '0', '--out', str(tmp_path))
        assert result.returncode == 2
        assert 'EmptySampleError' in result.stderr

    def test_limitset_default_fixture(self, tmp_path):
        result = run_cli('limitset', '--out', str(tmp_path))
        assert result.returncode == 0, result.stderr
        assert (tmp_path / 'limit_set.csv').exists()
        assert (tmp_path / 'limit_set_report.json').exists()

    def test_unknown_suite(self, tmp_path):
        result = run_cli('verify', 'nope', '--out', str(tmp_path))
        assert result.returncode == 2

    def test_invalid_basis_choice(self, matrix_file, tmp_path):
        result = run_cli('cartan', str(matrix_file), '--basis', 'polar', '--out', str(tmp_path))
        assert result.returncode == 2
