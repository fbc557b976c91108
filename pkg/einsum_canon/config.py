"""
einsum-canon - Configuração
===========================
Configuração em JSON (``canon_config.json``) com valores padrão, ``.env``
via python-dotenv e sobrescritas por variáveis de ambiente.

Variáveis de ambiente:
    EINSUM_CANON_CONFIG     caminho do arquivo de configuração
    FEINSUM_DB              caminho do banco de fatos
    FEINSUM_DEVICE          device padrão
    EINSUM_CANON_LOG_LEVEL  nível de log

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import load_dotenv

from .corpus import GeneratorParams
from .errors import StorageError

logger = logging.getLogger("Config")

CONFIG_FILE = Path("canon_config.json")

DEFAULT_CONFIG = {
    "db_path": "./feinsum-facts.db",
    "default_device": "h100",
    "brute_force_budget": 10 ** 7,
    "prune_automorphisms": True,
    "fuzz_iterations": 200,
    "bench_count": 50,
    "log_level": "WARNING",
    "generator": {
        "max_indices": 6,
        "lengths": [2, 3, 4],
        "dtypes": ["float32", "float64"],
        "reuse_probability": 0.4,
        "max_dim": 3,
    },
    "devices": {},
}

ENV_OVERRIDES = {
    "FEINSUM_DB": "db_path",
    "FEINSUM_DEVICE": "default_device",
    "EINSUM_CANON_LOG_LEVEL": "log_level",
}


def _merge(base: Dict, override: Dict) -> Dict:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def config_path(path: Optional[str] = None) -> Path:
    if path:
        return Path(path)
    return Path(os.getenv("EINSUM_CANON_CONFIG", str(CONFIG_FILE)))


def load_config(path: Optional[str] = None) -> Dict:
    """
    Carrega a configuração: padrões <- arquivo JSON <- variáveis de ambiente.

    Raises:
        StorageError: arquivo existente mas ilegível ou com JSON inválido
    """
    load_dotenv()
    config_file = config_path(path)
    config = copy.deepcopy(DEFAULT_CONFIG)
    if config_file.exists():
        try:
            with open(config_file, "r", encoding="utf-8") as f:
                config = _merge(config, json.load(f))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"configuração inválida em {config_file}: {exc}") from exc
    else:
        logger.debug(f"[CONFIG] {config_file} não encontrado, usando padrões")
    for env, key in ENV_OVERRIDES.items():
        value = os.getenv(env)
        if value:
            config[key] = value
    return config


def save_config(config: Dict, path: Optional[str] = None) -> None:
    """Salva a configuração no arquivo JSON."""
    config_file = config_path(path)
    with open(config_file, "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2, ensure_ascii=False)
    logger.info(f"[CONFIG] configuração salva em {config_file}")


def generator_params(config: Dict, seed: int, b: int, n: int) -> GeneratorParams:
    """``GeneratorParams`` a partir da seção ``generator`` da configuração."""
    section = config.get("generator", {})
    return GeneratorParams(
        b=b,
        n=n,
        max_indices=int(section.get("max_indices", 6)),
        lengths=tuple(int(x) for x in section.get("lengths", (2, 3, 4))),
        dtypes=tuple(section.get("dtypes", ("float32", "float64"))),
        seed=seed,
        max_dim=int(section.get("max_dim", 3)),
        reuse_probability=float(section.get("reuse_probability", 0.4)),
    )
