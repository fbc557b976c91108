"""
Configuração compartilhada dos testes do einsum-canon.
"""

import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from einsum_canon.batched_einsum import BatchedEinsum
from einsum_canon.notation import parse_classic

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "ci",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).parent / "fixtures"

collect_ignore = ["examples"]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="roda também os testes lentos")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: varreduras exaustivas demoradas (use --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="lento: use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def load_fixture(name: str) -> BatchedEinsum:
    return parse_classic((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def spec():
    """Carrega um ``.spec`` de ``fixtures/`` pelo nome."""
    return load_fixture


@pytest.fixture
def db_path(tmp_path) -> str:
    return str(tmp_path / "feinsum-facts.db")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Isola configuração e variáveis de ambiente de cada teste."""
    for var in ("EINSUM_CANON_CONFIG", "FEINSUM_DB", "FEINSUM_DEVICE", "EINSUM_CANON_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv("EINSUM_CANON_CONFIG", str(tmp_path / "canon_config.json"))
