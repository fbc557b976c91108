"""
einsum-canon - Modelo de Einsums em Lote
========================================
Arrays, einsums e einsums em lote (batched), com conjuntos derivados,
validação, igualdade e um avaliador numérico de referência.

Um einsum em lote é a quíntupla ``(b, n, I_out, I_in, args)``: ``b`` linhas
(einsums) que compartilham a mesma notação de índices e diferem apenas nos
arrays de cada posição de operando.

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import EvaluationError, ValidationError

logger = logging.getLogger("BatchedEinsum")

IndexList = Tuple[str, ...]


class DtypeCode(Enum):
    """Tipos de dado suportados, na ordem de ``DTYPE_RANK``."""
    INT8 = "int8"
    INT32 = "int32"
    INT64 = "int64"
    FLOAT16 = "float16"
    FLOAT32 = "float32"
    FLOAT64 = "float64"
    COMPLEX64 = "complex64"
    COMPLEX128 = "complex128"

    @property
    def rank(self) -> int:
        return DTYPE_RANK[self]

    @property
    def numpy_dtype(self) -> np.dtype:
        return np.dtype(self.value)

    @property
    def itemsize(self) -> int:
        return self.numpy_dtype.itemsize

    @classmethod
    def parse(cls, value) -> "DtypeCode":
        """Aceita ``DtypeCode``, nome (``"float64"``) ou dtype numpy."""
        if isinstance(value, cls):
            return value
        try:
            return cls(np.dtype(value).name)
        except (TypeError, ValueError):
            raise ValueError(f"dtype não suportado: {value!r}") from None

    @classmethod
    def widest(cls, dtypes: Sequence["DtypeCode"]) -> "DtypeCode":
        """Promoção numpy dos dtypes, restrita à enumeração."""
        if not dtypes:
            return cls.FLOAT64
        promoted = np.result_type(*[d.numpy_dtype for d in dtypes])
        try:
            return cls(promoted.name)
        except ValueError:
            # int8 + float16 promove para float16; int64 + float16 para float64
            return cls.FLOAT64 if promoted.kind == "f" else cls.COMPLEX128


DTYPE_RANK: Dict[DtypeCode, int] = {
    DtypeCode.INT8: 1,
    DtypeCode.INT32: 2,
    DtypeCode.INT64: 3,
    DtypeCode.FLOAT16: 4,
    DtypeCode.FLOAT32: 5,
    DtypeCode.FLOAT64: 6,
    DtypeCode.COMPLEX64: 7,
    DtypeCode.COMPLEX128: 8,
}


@dataclass(frozen=True)
class ArrayMeta:
    """Metadados de um array: nome, shape e dtype."""
    name: str
    shape: Tuple[int, ...]
    dtype: DtypeCode = DtypeCode.FLOAT64

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        object.__setattr__(self, "dtype", DtypeCode.parse(self.dtype))

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64)) if self.shape else 1

    @property
    def nbytes(self) -> int:
        return self.size * self.dtype.itemsize

    def to_dict(self) -> Dict:
        return {"name": self.name, "shape": list(self.shape), "dtype": self.dtype.value}


def array(name: str, shape: Sequence[int], dtype="float64") -> ArrayMeta:
    """Atalho para ``ArrayMeta`` (``array("A", (96, 4))``)."""
    return ArrayMeta(name, tuple(shape), DtypeCode.parse(dtype))


@dataclass(frozen=True)
class EinsumSpec:
    """Um einsum isolado (uma linha de um einsum em lote)."""
    i_out: IndexList
    i_in: Tuple[IndexList, ...]
    args: Tuple[ArrayMeta, ...]

    @property
    def n(self) -> int:
        return len(self.i_in)

    @property
    def all_indices(self) -> FrozenSet[str]:
        return frozenset(x for idx in self.i_in for x in idx) | frozenset(self.i_out)


@dataclass(frozen=True)
class BatchedEinsum:
    """
    Einsum em lote.

    ``args[i][j]`` é o array da linha ``i`` na posição de operando ``j``;
    ``i_in[j]`` é a lista de índices da posição ``j``, comum a todas as linhas.
    """
    i_out: IndexList
    i_in: Tuple[IndexList, ...]
    args: Tuple[Tuple[ArrayMeta, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "i_out", tuple(self.i_out))
        object.__setattr__(self, "i_in", tuple(tuple(idx) for idx in self.i_in))
        object.__setattr__(self, "args", tuple(tuple(row) for row in self.args))

    @property
    def b(self) -> int:
        return len(self.args)

    @property
    def n(self) -> int:
        return len(self.i_in)

    def row(self, i: int) -> EinsumSpec:
        """Linha ``i`` (0-based) como ``EinsumSpec``."""
        return EinsumSpec(self.i_out, self.i_in, self.args[i])

    @cached_property
    def universe(self) -> Tuple[ArrayMeta, ...]:
        """Arrays distintos por nome, na ordem da primeira ocorrência (linha a linha)."""
        seen: Dict[str, ArrayMeta] = {}
        for row in self.args:
            for arg in row:
                seen.setdefault(arg.name, arg)
        return tuple(seen.values())

    @cached_property
    def arg_names(self) -> Tuple[str, ...]:
        return tuple(a.name for a in self.universe)

    @cached_property
    def all_indices(self) -> Tuple[str, ...]:
        """Índices na ordem da primeira ocorrência (entradas, depois saída)."""
        ordered: Dict[str, None] = {}
        for idx in self.i_in:
            for x in idx:
                ordered.setdefault(x, None)
        for x in self.i_out:
            ordered.setdefault(x, None)
        return tuple(ordered)

    @cached_property
    def reduction_indices(self) -> Tuple[str, ...]:
        out = set(self.i_out)
        return tuple(x for x in self.all_indices if x not in out)

    @cached_property
    def index_to_length(self) -> Dict[str, int]:
        """Comprimento de cada índice (primeira ocorrência; ver ``validate``)."""
        lengths: Dict[str, int] = {}
        for row in self.args:
            for idx, arg in zip(self.i_in, row):
                for x, length in zip(idx, arg.shape):
                    lengths.setdefault(x, length)
        return lengths

    @property
    def subscripts(self) -> str:
        """Notação clássica ``"ij,jk->ik"`` (índices concatenados)."""
        return ",".join("".join(idx) for idx in self.i_in) + "->" + "".join(self.i_out)

    def to_dict(self) -> Dict:
        return {
            "b": self.b,
            "n": self.n,
            "i_out": list(self.i_out),
            "i_in": [list(idx) for idx in self.i_in],
            "args": [[a.name for a in row] for row in self.args],
            "arrays": [a.to_dict() for a in self.universe],
        }


# ============================================================================
# CONJUNTOS DERIVADOS
# ============================================================================

@dataclass(frozen=True)
class DerivedSets:
    """Conjuntos derivados usados na codificação em grafo."""
    all_dims: FrozenSet[int]
    input_accesses: FrozenSet[Tuple[int, int, str, int]]
    output_accesses: FrozenSet[Tuple[str, int]]
    dtypes: FrozenSet[DtypeCode]
    axis_lengths: FrozenSet[int]


def derived_sets(e: BatchedEinsum) -> DerivedSets:
    """
    Calcula os conjuntos derivados de ``e``.

    Acessos de entrada são quádruplas ``(linha, posição, índice, d)`` e
    acessos de saída pares ``(índice, d)``, todos 1-based.
    """
    all_dims = frozenset({a.dim for a in e.universe} | {len(e.i_out)})
    input_accesses = frozenset(
        (i + 1, j + 1, x, d + 1)
        for i in range(e.b)
        for j, idx in enumerate(e.i_in)
        for d, x in enumerate(idx)
    )
    output_accesses = frozenset((x, d + 1) for d, x in enumerate(e.i_out))
    return DerivedSets(
        all_dims=all_dims,
        input_accesses=input_accesses,
        output_accesses=output_accesses,
        dtypes=frozenset(a.dtype for a in e.universe),
        axis_lengths=frozenset(e.index_to_length.values()),
    )


# ============================================================================
# VALIDAÇÃO
# ============================================================================

@dataclass(frozen=True)
class Violation:
    """Uma violação de validade, com linha/posição 1-based quando aplicável."""
    kind: str
    message: str
    row: Optional[int] = None
    slot: Optional[int] = None
    index: Optional[str] = None

    def __str__(self) -> str:
        where = []
        if self.row is not None:
            where.append(f"linha {self.row}")
        if self.slot is not None:
            where.append(f"posição {self.slot}")
        prefix = f"[{', '.join(where)}] " if where else ""
        return f"{prefix}{self.kind}: {self.message}"

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "message": self.message,
            "row": self.row,
            "slot": self.slot,
            "index": self.index,
        }


def validate(e: BatchedEinsum) -> List[Violation]:
    """
    Verifica as condições de validade de ``e``.

    Returns:
        Lista vazia se ``e`` é válido; caso contrário todas as violações.
    """
    violations: List[Violation] = []
    if e.b < 1:
        violations.append(Violation("empty_batch", "b deve ser >= 1"))
    if e.n < 1:
        violations.append(Violation("no_operands", "n deve ser >= 1"))

    seen_out = set()
    for x in e.i_out:
        if x in seen_out:
            violations.append(Violation("duplicate_output_index", f"índice {x} repetido na saída", index=x))
        seen_out.add(x)

    inputs = {x for idx in e.i_in for x in idx}
    for x in e.i_out:
        if x not in inputs:
            violations.append(Violation(
                "output_not_in_input", f"índice de saída {x} não aparece nas entradas", index=x))

    by_name: Dict[str, ArrayMeta] = {}
    lengths: Dict[str, Tuple[int, int]] = {}
    for i, row in enumerate(e.args):
        if len(row) != e.n:
            violations.append(Violation(
                "row_length", f"linha com {len(row)} operandos, esperado {e.n}", row=i + 1))
            continue
        for j, (idx, arg) in enumerate(zip(e.i_in, row)):
            known = by_name.setdefault(arg.name, arg)
            if known != arg:
                violations.append(Violation(
                    "name_conflict",
                    f"array {arg.name} declarado com metadados diferentes "
                    f"({known.shape}/{known.dtype.value} vs {arg.shape}/{arg.dtype.value})",
                    row=i + 1, slot=j + 1))
            if len(idx) != arg.dim:
                violations.append(Violation(
                    "arity", f"{arg.name} tem {arg.dim} dimensões mas a lista de índices tem {len(idx)}",
                    row=i + 1, slot=j + 1))
                continue
            for x, length in zip(idx, arg.shape):
                if length < 1:
                    violations.append(Violation(
                        "nonpositive_length", f"eixo de {arg.name} com comprimento {length}",
                        row=i + 1, slot=j + 1, index=x))
                if x in lengths and lengths[x][0] != length:
                    violations.append(Violation(
                        "length_mismatch",
                        f"índice {x} com comprimentos diferentes ({lengths[x][0]} vs {length})",
                        row=i + 1, slot=j + 1, index=x))
                lengths.setdefault(x, (length, j))
    return violations


def ensure_valid(e: BatchedEinsum) -> BatchedEinsum:
    """Levanta ``ValidationError`` se ``e`` for inválido; devolve ``e``."""
    violations = validate(e)
    if violations:
        raise ValidationError(violations)
    return e


def equals(e1: BatchedEinsum, e2: BatchedEinsum) -> bool:
    """Igualdade posicional de einsums em lote (nomes, shapes e dtypes)."""
    return (
        e1.b == e2.b
        and e1.n == e2.n
        and e1.i_out == e2.i_out
        and e1.i_in == e2.i_in
        and e1.args == e2.args
    )


# ============================================================================
# AVALIAÇÃO
# ============================================================================

_EINSUM_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def evaluate(e: BatchedEinsum, bindings: Mapping[str, np.ndarray]) -> List[np.ndarray]:
    """
    Avalia as ``b`` linhas de ``e``.

    Cada saída é a soma, sobre os índices de redução, do produto dos
    operandos, acumulada no dtype mais largo da linha (sem otimização de
    caminho de contração).

    Args:
        e: einsum válido
        bindings: nome do array -> dados com shape/dtype declarados

    Returns:
        Lista com ``b`` arrays, na ordem das linhas.

    Raises:
        EvaluationError: binding ausente ou divergente, ou mais de 52
            índices distintos (as letras aceitas por ``np.einsum``)
    """
    ensure_valid(e)
    symbols = e.all_indices
    if len(symbols) > len(_EINSUM_LETTERS):
        raise EvaluationError(
            f"{len(symbols)} índices distintos excedem os {len(_EINSUM_LETTERS)} aceitos por np.einsum")
    letter = {x: _EINSUM_LETTERS[k] for k, x in enumerate(symbols)}
    subscripts = (
        ",".join("".join(letter[x] for x in idx) for idx in e.i_in)
        + "->" + "".join(letter[x] for x in e.i_out)
    )

    data: Dict[str, np.ndarray] = {}
    for meta in e.universe:
        if meta.name not in bindings:
            raise EvaluationError(f"array {meta.name} sem binding")
        value = np.asarray(bindings[meta.name])
        if value.shape != meta.shape:
            raise EvaluationError(f"{meta.name}: shape {value.shape} != declarado {meta.shape}")
        if value.dtype != meta.dtype.numpy_dtype:
            raise EvaluationError(f"{meta.name}: dtype {value.dtype} != declarado {meta.dtype.value}")
        data[meta.name] = value

    results = []
    for row in e.args:
        acc = DtypeCode.widest([a.dtype for a in row]).numpy_dtype
        operands = [data[a.name].astype(acc, copy=False) for a in row]
        results.append(np.asarray(np.einsum(subscripts, *operands, dtype=acc, optimize=False)))
    logger.debug(f"[EVAL] {subscripts} avaliado para {e.b} linha(s)")
    return results
