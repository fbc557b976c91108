"""
einsum-canon - Banco de Fatos de Desempenho
===========================================
Banco persistente de medições (transformação, tempo, FLOP/s) indexado pela
chave canônica do einsum em lote e pelo device.

Formato do arquivo (texto, UTF-8):
    feinsum-facts v1
    <chave>\\t<device>\\t<transform>\\t<wall_s>\\t<flop_rate>\\t<recorded_at>\\t<meta>

Escritas são atômicas (arquivo temporário + fsync + os.replace) e
serializadas por um lock consultivo em ``<db>.lock``; leitores nunca veem
registros parciais.

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
import math
import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Dict, Iterator, List, Optional, Sequence
from urllib.parse import unquote

from .batched_einsum import BatchedEinsum, ensure_valid, equals
from .canonicalize import CanonResult, canonicalize
from .errors import InvalidRecordError, NotationError, NotFoundError, StorageError, ValidationError
from .notation import canonical_key, parse_canonical_key

try:
    import fcntl

    def _lock(f) -> None:
        fcntl.flock(f.fileno(), fcntl.LOCK_EX)

    def _unlock(f) -> None:
        fcntl.flock(f.fileno(), fcntl.LOCK_UN)

except ModuleNotFoundError:
    import msvcrt

    def _lock(f) -> None:
        f.seek(0)
        msvcrt.locking(f.fileno(), msvcrt.LK_LOCK, 1)

    def _unlock(f) -> None:
        f.seek(0)
        msvcrt.locking(f.fileno(), msvcrt.LK_UNLCK, 1)


logger = logging.getLogger("FactsDatabase")

FACTS_HEADER = "feinsum-facts v1"
DEFAULT_DB_PATH = "./feinsum-facts.db"
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S.%fZ"

_META_ESCAPES = (("%", "%25"), ("\t", "%09"), ("\n", "%0A"), ("\r", "%0D"))


def escape_meta(meta: str) -> str:
    for raw, escaped in _META_ESCAPES:
        meta = meta.replace(raw, escaped)
    return meta


def unescape_meta(text: str) -> str:
    return unquote(text)


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


# ============================================================================
# REGISTROS
# ============================================================================

@dataclass(frozen=True)
class Measurement:
    """Medição ainda sem chave: o que o chamador entrega a ``record_facts``."""
    transform_id: str
    wall_time_s: float
    flop_rate: float = 0.0
    meta: str = ""
    recorded_at: Optional[datetime] = None


@dataclass(frozen=True)
class FactRecord:
    """Uma linha do banco."""
    canonical_key: str
    device_id: str
    transform_id: str
    wall_time_s: float
    flop_rate: float
    recorded_at: datetime
    meta: str = ""

    def __post_init__(self):
        for name in ("canonical_key", "device_id", "transform_id"):
            value = getattr(self, name)
            if not value or any(ch in value for ch in "\t\n\r"):
                raise InvalidRecordError(f"{name} vazio ou com tab/quebra de linha: {value!r}")
        wall = float(self.wall_time_s)
        flop = float(self.flop_rate)
        if not math.isfinite(wall) or wall <= 0:
            raise InvalidRecordError(f"wall_time_s deve ser positivo, recebido {self.wall_time_s!r}")
        if not math.isfinite(flop) or flop < 0:
            raise InvalidRecordError(f"flop_rate deve ser não negativo, recebido {self.flop_rate!r}")
        recorded_at = self.recorded_at
        if recorded_at.tzinfo is None:
            recorded_at = recorded_at.replace(tzinfo=timezone.utc)
        object.__setattr__(self, "wall_time_s", wall)
        object.__setattr__(self, "flop_rate", flop)
        object.__setattr__(self, "recorded_at", recorded_at.astimezone(timezone.utc))

    def to_line(self) -> str:
        return "\t".join([
            self.canonical_key,
            self.device_id,
            self.transform_id,
            repr(self.wall_time_s),
            repr(self.flop_rate),
            self.recorded_at.strftime(TIMESTAMP_FORMAT),
            escape_meta(self.meta),
        ])

    @classmethod
    def from_line(cls, line: str) -> "FactRecord":
        fields = line.split("\t")
        if len(fields) != 7:
            raise InvalidRecordError(f"esperados 7 campos, encontrados {len(fields)}")
        key, device, transform, wall, flop, stamp, meta = fields
        try:
            recorded_at = datetime.strptime(stamp, TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)
            return cls(key, device, transform, float(wall), float(flop), recorded_at, unescape_meta(meta))
        except ValueError as exc:
            raise InvalidRecordError(f"campo inválido: {exc}") from None

    def to_dict(self) -> Dict:
        return {
            "canonical_key": self.canonical_key,
            "device_id": self.device_id,
            "transform_id": self.transform_id,
            "wall_time_s": self.wall_time_s,
            "flop_rate": self.flop_rate,
            "recorded_at": self.recorded_at.strftime(TIMESTAMP_FORMAT),
            "meta": self.meta,
        }


@dataclass(frozen=True)
class Retrieval:
    """Melhor registro e os mapas da canonicalização da consulta."""
    record: FactRecord
    canon: CanonResult

    def to_lines(self) -> List[str]:
        r = self.record
        lines = [
            f"transform: {r.transform_id}",
            f"wall_time_s: {r.wall_time_s!r}",
            f"flop_rate: {r.flop_rate!r}",
            f"recorded_at: {r.recorded_at.strftime(TIMESTAMP_FORMAT)}",
        ]
        if r.meta:
            lines.append(f"meta: {escape_meta(r.meta)}")
        lines += [f"arg: {k} -> {v}" for k, v in sorted(self.canon.sigma_arg.items())]
        lines += [f"idx: {k} -> {v}" for k, v in sorted(self.canon.sigma_idx.items())]
        return lines


# ============================================================================
# BANCO
# ============================================================================

@contextmanager
def _locked(lock_path: str) -> Iterator[None]:
    with open(lock_path, "a+") as handle:
        _lock(handle)
        try:
            yield
        finally:
            _unlock(handle)


def check_key(key: str, recanonicalize: bool = True) -> BatchedEinsum:
    """
    Verifica que ``key`` é chave canônica: interpreta e (opcionalmente)
    re-canonicaliza.

    Raises:
        InvalidRecordError: chave malformada ou não canônica
    """
    try:
        e = parse_canonical_key(key)
    except (NotationError, ValidationError) as exc:
        raise InvalidRecordError(f"chave inválida: {exc}") from None
    if recanonicalize and not equals(canonicalize(e).canonical, e):
        raise InvalidRecordError("chave não é a serialização de uma forma canônica")
    return e


class FactsDatabase:
    """
    Banco de fatos em arquivo único.

    Exemplo:
        >>> db = FactsDatabase("./feinsum-facts.db")
        >>> db.record_facts(e, "h100", [Measurement("tile-16x16", 1.2e-3)])
        >>> db.retrieve(e2, "h100").record.transform_id
    """

    def __init__(self, path: str = DEFAULT_DB_PATH):
        self.path = os.fspath(path)
        self.lock_path = self.path + ".lock"

    def load(self) -> List[FactRecord]:
        """
        Todos os registros, na ordem do arquivo.

        Raises:
            StorageError: falha de I/O, cabeçalho ou linha corrompidos
        """
        try:
            with open(self.path, "r", encoding="utf-8", newline="\n") as handle:
                text = handle.read()
        except FileNotFoundError:
            return []
        except OSError as exc:
            raise StorageError(f"falha ao ler {self.path}: {exc}") from exc
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or lines[0] != FACTS_HEADER:
            raise StorageError(f"{self.path}: cabeçalho '{FACTS_HEADER}' ausente")
        records = []
        for line_no, line in enumerate(lines[1:], start=2):
            try:
                records.append(FactRecord.from_line(line))
            except InvalidRecordError as exc:
                raise StorageError(f"{self.path}:{line_no}: {exc}") from None
        return records

    def append(self, records: Sequence[FactRecord], check_keys: bool = True) -> int:
        """
        Acrescenta ``records`` (sem deduplicação) com substituição atômica.

        Returns:
            Número de registros acrescentados.

        Raises:
            InvalidRecordError: chave não canônica (com ``check_keys``)
            StorageError: falha de I/O
        """
        if check_keys:
            for key in {r.canonical_key for r in records}:
                check_key(key)
        directory = os.path.dirname(os.path.abspath(self.path))
        try:
            os.makedirs(directory, exist_ok=True)
            with _locked(self.lock_path):
                existing = self.load()
                fd, tmp_path = tempfile.mkstemp(prefix=".feinsum-", suffix=".tmp", dir=directory)
                try:
                    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                        handle.write(FACTS_HEADER + "\n")
                        for record in list(existing) + list(records):
                            handle.write(record.to_line() + "\n")
                        handle.flush()
                        os.fsync(handle.fileno())
                    os.replace(tmp_path, self.path)
                except BaseException:
                    if os.path.exists(tmp_path):
                        os.unlink(tmp_path)
                    raise
        except OSError as exc:
            raise StorageError(f"falha ao gravar {self.path}: {exc}") from exc
        logger.info(f"[FACTS] {len(records)} registro(s) acrescentado(s) em {self.path}")
        return len(records)

    def record_facts(self, e: BatchedEinsum, device_id: str, measurements: Sequence[Measurement]) -> int:
        """Canonicaliza ``e`` e grava as medições sob a sua chave."""
        ensure_valid(e)
        canon = canonicalize(e)
        key = canonical_key(canon.canonical, check=False)
        check_key(key, recanonicalize=False)
        now = _utcnow()
        records = [
            FactRecord(key, device_id, m.transform_id, m.wall_time_s, m.flop_rate,
                       m.recorded_at or now, m.meta)
            for m in measurements
        ]
        return self.append(records, check_keys=False)

    def records_for(self, key: str, device_id: Optional[str] = None) -> List[FactRecord]:
        return [
            r for r in self.load()
            if r.canonical_key == key and (device_id is None or r.device_id == device_id)
        ]

    def retrieve(self, e: BatchedEinsum, device_id: str) -> Retrieval:
        """
        Melhor registro (menor tempo; empate -> mais recente, depois a última linha) para ``e`` no device.

        Raises:
            NotFoundError: nenhum registro para a chave e o device
        """
        ensure_valid(e)
        canon = canonicalize(e)
        key = canonical_key(canon.canonical, check=False)
        candidates = self.records_for(key, device_id)
        if not candidates:
            raise NotFoundError(f"nenhum fato para {key} em {device_id}")
        # empate total: a linha gravada por último
        _, best = min(
            enumerate(candidates),
            key=lambda item: (item[1].wall_time_s, -item[1].recorded_at.timestamp(), -item[0]),
        )
        logger.debug(f"[FACTS] {len(candidates)} candidato(s), melhor {best.transform_id}")
        return Retrieval(best, canon)


def record_facts(e: BatchedEinsum, device_id: str, measurements: Sequence[Measurement],
                 db_path: str = DEFAULT_DB_PATH) -> int:
    return FactsDatabase(db_path).record_facts(e, device_id, measurements)


def retrieve(e: BatchedEinsum, device_id: str, db_path: str = DEFAULT_DB_PATH) -> Retrieval:
    return FactsDatabase(db_path).retrieve(e, device_id)
