import os
import sys

import numpy as np
import orjson
import pytest

# Adicionar raiz e src ao path para imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from src.geometry.fixtures import FixtureName, build_fixture, schottky_generators
from src.geometry.groups import weyl_matrix
from src.geometry.invisible_domain import InvisibleDomain


def pytest_configure(config):
    """Marcadores usados pela suíte."""
    config.addinivalue_line("markers", "slow: testes lentos (deselecione com '-m \"not slow\"')")
    config.addinivalue_line("markers", "integration: testes de integração")
    config.addinivalue_line("markers", "unit: testes unitários")
    config.addinivalue_line("markers", "performance: testes de desempenho")


@pytest.fixture
def rng():
    """Gerador semeado para testes reprodutíveis."""
    return np.random.default_rng(20240611)


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "output"
    path.mkdir()
    return path


@pytest.fixture
def matrix_file(tmp_path):
    """
    Arquivo de matrizes com comentários: identidade e a(2, 0.5) em n = 2.

    Returns:
        Path do arquivo
    """
    boost = weyl_matrix(2.0, 0.5, 2)
    lines = ["# identidade", *(' '.join(str(v) for v in row) for row in np.eye(4))]
    lines += ["", "# boost a(2, 0.5)", *(' '.join(repr(float(v)) for v in row) for row in boost)]
    path = tmp_path / "matrices.txt"
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return path


@pytest.fixture
def generators_file(tmp_path):
    """Geradores de Schottky (separação 2) no formato JSON da CLI."""
    presentation = schottky_generators(2.0)
    payload = {
        'basis': 'diagonal',
        'relation_hint': 'free',
        'generators': [g.diagonal.reshape(-1).tolist() for g in presentation.generators],
    }
    path = tmp_path / "generators.json"
    path.write_bytes(orjson.dumps(payload))
    return path


@pytest.fixture(scope="session")
def cyclic_fixture():
    return build_fixture(FixtureName.CYCLIC_PROXIMAL, 2)


@pytest.fixture(scope="session")
def schottky_fixture():
    return build_fixture(FixtureName.SCHOTTKY, 2)


@pytest.fixture(scope="session")
def fuchsian_fixture():
    """Círculo equatorial com 256 pontos em t = 0 (n = 2)."""
    return build_fixture(FixtureName.FUCHSIAN_SPHERE, 2, count=256)


@pytest.fixture(scope="session")
def join_fixture():
    """Junção S⁰ × {0} com S⁰ × {π/2} em n = 2."""
    return build_fixture(FixtureName.JOIN_SPHERES, 2, p=0)


@pytest.fixture(scope="session")
def equator_domain(fuchsian_fixture) -> InvisibleDomain:
    return fuchsian_fixture.domain()


@pytest.fixture(scope="session")
def join_domain(join_fixture) -> InvisibleDomain:
    return join_fixture.domain()


@pytest.fixture(scope="session")
def schottky_domain(schottky_fixture) -> InvisibleDomain:
    return schottky_fixture.domain()
