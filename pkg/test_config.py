"""
Testes da camada de configuração.
"""

import json

import pytest

from einsum_canon.config import DEFAULT_CONFIG, generator_params, load_config, save_config
from einsum_canon.errors import StorageError


def test_defaults_when_file_is_missing():
    config = load_config()
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_file_merges_over_defaults(tmp_path):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({
        "default_device": "p100",
        "generator": {"lengths": [5]},
        "devices": {"lab": {"peak_flops": 4.0, "peak_bandwidth": 2.0}},
    }), encoding="utf-8")
    config = load_config(str(path))
    assert config["default_device"] == "p100"
    assert config["generator"]["lengths"] == [5]
    assert config["generator"]["max_dim"] == DEFAULT_CONFIG["generator"]["max_dim"]
    assert config["devices"]["lab"]["peak_flops"] == 4.0
    assert DEFAULT_CONFIG["generator"]["lengths"] == [2, 3, 4]


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("FEINSUM_DB", str(tmp_path / "other.db"))
    monkeypatch.setenv("FEINSUM_DEVICE", "mi250x")
    config = load_config()
    assert config["db_path"] == str(tmp_path / "other.db")
    assert config["default_device"] == "mi250x"


def test_save_and_load(tmp_path):
    config = load_config()
    config["bench_count"] = 7
    save_config(config)
    assert (tmp_path / "canon_config.json").exists()
    assert load_config()["bench_count"] == 7


def test_invalid_json_raises_storage_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(StorageError):
        load_config(str(path))


def test_generator_params_from_config():
    config = load_config()
    config["generator"]["lengths"] = [3, 7]
    params = generator_params(config, seed=5, b=2, n=3)
    assert (params.b, params.n, params.seed) == (2, 3, 5)
    assert params.lengths == (3, 7)
    assert params.dtypes == ("float32", "float64")
    assert params.max_indices == 6
