"""
einsum-canon - Corpus de Instâncias
=====================================
Instâncias aleatórias determinísticas por semente, embaralhamento isomorfo
com testemunha, a família pequena exaustiva e os corpora de formas
(contrações estilo TCCG e operadores DG-FEM).

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import itertools
import logging
import string
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .batched_einsum import ArrayMeta, BatchedEinsum, DtypeCode, ensure_valid
from .canonicalize import SubstitutionWitness
from .errors import InfeasibleParamsError

logger = logging.getLogger("Corpus")

LETTERS = string.ascii_lowercase


@dataclass(frozen=True)
class GeneratorParams:
    """Faixas do gerador aleatório."""
    b: int = 2
    n: int = 2
    max_indices: int = 4
    lengths: Tuple[int, ...] = (2, 3, 4)
    dtypes: Tuple[str, ...] = ("float32", "float64")
    seed: int = 0
    max_dim: int = 3
    max_out: Optional[int] = None
    reuse_probability: float = 0.4
    repeat_probability: float = 0.05

    def check(self) -> None:
        if self.b < 1 or self.n < 1:
            raise InfeasibleParamsError("b e n devem ser >= 1")
        if not 1 <= self.max_indices <= len(LETTERS):
            raise InfeasibleParamsError(f"max_indices deve estar em 1..{len(LETTERS)}")
        if self.max_dim < 1:
            raise InfeasibleParamsError("max_dim deve ser >= 1")
        if not self.lengths or any(length < 1 for length in self.lengths):
            raise InfeasibleParamsError("lengths deve conter extensões positivas")
        if not self.dtypes:
            raise InfeasibleParamsError("dtypes não pode ser vazio")
        if self.max_out is not None and self.max_out > self.max_indices:
            raise InfeasibleParamsError("mais índices de saída que índices disponíveis")


def generate_random(params: GeneratorParams) -> BatchedEinsum:
    """
    Einsum em lote aleatório e válido, determinístico por ``params.seed``.

    Raises:
        InfeasibleParamsError: parâmetros fora das faixas
    """
    params.check()
    rng = np.random.default_rng(params.seed)
    dtypes = [DtypeCode.parse(d) for d in params.dtypes]
    n_indices = int(rng.integers(1, params.max_indices + 1))
    symbols = list(LETTERS[:n_indices])
    length = {x: int(rng.choice(params.lengths)) for x in symbols}

    i_in = []
    for _ in range(params.n):
        dim = int(rng.integers(1, params.max_dim + 1))
        pool = [str(x) for x in rng.permutation(symbols)]
        idx = []
        for d in range(dim):
            if idx and rng.random() < params.repeat_probability:
                idx.append(idx[int(rng.integers(len(idx)))])
            else:
                idx.append(pool[d % len(pool)])
        i_in.append(tuple(idx))

    used = sorted({x for idx in i_in for x in idx})
    max_out = len(used) if params.max_out is None else min(params.max_out, len(used))
    n_out = int(rng.integers(0, max_out + 1))
    i_out = tuple(rng.permutation(used)[:n_out].tolist())

    counter = itertools.count()
    made: List[ArrayMeta] = []
    rows = []
    for _ in range(params.b):
        row = []
        for idx in i_in:
            shape = tuple(length[x] for x in idx)
            compatible = [a for a in made if a.shape == shape]
            if compatible and rng.random() < params.reuse_probability:
                row.append(compatible[int(rng.integers(len(compatible)))])
            else:
                meta = ArrayMeta(f"T{next(counter)}", shape, dtypes[int(rng.integers(len(dtypes)))])
                made.append(meta)
                row.append(meta)
        rows.append(tuple(row))
    e = ensure_valid(BatchedEinsum(i_out=i_out, i_in=tuple(i_in), args=tuple(rows)))
    logger.debug(f"[CORPUS] semente {params.seed}: {e.subscripts} b={e.b} com {len(made)} array(s)")
    return e


def _fresh_names(count: int, rng: np.random.Generator, pool: Sequence[str]) -> List[str]:
    if count <= len(pool):
        return [pool[k] for k in rng.permutation(len(pool))[:count]]
    return [f"idx{k + 1}" for k in rng.permutation(count)]


def scramble(e: BatchedEinsum, seed: int) -> Tuple[BatchedEinsum, SubstitutionWitness]:
    """
    Aplica permutações aleatórias de linhas, posições, índices e arrays.

    Returns:
        ``(e_scrambled, w)`` com ``verify_witness(e_scrambled, e, w)``.
    """
    ensure_valid(e)
    rng = np.random.default_rng(seed)
    row_perm = rng.permutation(e.b)
    slot_perm = rng.permutation(e.n)
    rename_idx = dict(zip(e.all_indices, _fresh_names(len(e.all_indices), rng, LETTERS)))
    arg_pool = [f"S{k}" for k in range(len(e.arg_names))]
    rename_arg = dict(zip(e.arg_names, _fresh_names(len(e.arg_names), rng, arg_pool)))

    i_out = tuple(rename_idx[x] for x in e.i_out)
    i_in = tuple(tuple(rename_idx[x] for x in e.i_in[slot_perm[j]]) for j in range(e.n))
    rows = []
    for i in range(e.b):
        source = e.args[row_perm[i]]
        rows.append(tuple(
            ArrayMeta(rename_arg[source[slot_perm[j]].name], source[slot_perm[j]].shape,
                      source[slot_perm[j]].dtype)
            for j in range(e.n)
        ))
    scrambled = BatchedEinsum(i_out=i_out, i_in=i_in, args=tuple(rows))
    witness = SubstitutionWitness(
        sigma_i={i + 1: int(row_perm[i]) + 1 for i in range(e.b)},
        sigma_j={j + 1: int(slot_perm[j]) + 1 for j in range(e.n)},
        sigma_idx=dict(rename_idx),
        sigma_arg=dict(rename_arg),
    )
    return scrambled, witness


# ============================================================================
# FAMÍLIA PEQUENA EXAUSTIVA
# ============================================================================

def _index_lists(symbols: Sequence[str], max_len: int) -> List[Tuple[str, ...]]:
    lists = []
    for size in range(1, max_len + 1):
        lists.extend(itertools.product(symbols, repeat=size))
    return lists


def _set_partitions(count: int) -> Iterator[Tuple[int, ...]]:
    """Strings de crescimento restrito: padrões de igualdade entre ``count`` células."""
    def grow(prefix: Tuple[int, ...], top: int):
        if len(prefix) == count:
            yield prefix
            return
        for k in range(top + 2):
            yield from grow(prefix + (k,), max(top, k))
    yield from grow((), -1)


def enumerate_small_family(
    max_b: int = 2,
    max_n: int = 2,
    max_indices: int = 3,
    max_list_len: int = 2,
    lengths: Tuple[int, ...] = (2, 3),
    dtypes: Tuple[str, ...] = ("float32", "float64"),
) -> Iterator[BatchedEinsum]:
    """
    Todos os einsums válidos da família pequena, com índices e arrays
    nomeados pela primeira ocorrência (cópias triviais por renomeação não
    são repetidas).
    """
    dtype_codes = [DtypeCode.parse(d) for d in dtypes]
    symbols = LETTERS[:max_indices]
    for n in range(1, max_n + 1):
        for i_in in itertools.product(_index_lists(symbols, max_list_len), repeat=n):
            used = []
            for idx in i_in:
                for x in idx:
                    if x not in used:
                        used.append(x)
            if used != list(symbols[:len(used)]):
                continue
            outs = [
                out for size in range(len(used) + 1)
                for out in itertools.permutations(used, size)
            ]
            for length_choice in itertools.product(lengths, repeat=len(used)):
                length = dict(zip(used, length_choice))
                shapes = [tuple(length[x] for x in idx) for idx in i_in]
                for b in range(1, max_b + 1):
                    yield from _family_args(i_in, outs, shapes, b, n, dtype_codes)


def _family_args(i_in, outs, shapes, b, n, dtype_codes) -> Iterator[BatchedEinsum]:
    cells = [(i, j) for i in range(b) for j in range(n)]
    for pattern in _set_partitions(len(cells)):
        groups: Dict[int, List[Tuple[int, int]]] = {}
        for cell, label in zip(cells, pattern):
            groups.setdefault(label, []).append(cell)
        if any(len({shapes[j] for _, j in members}) > 1 for members in groups.values()):
            continue
        for dtype_choice in itertools.product(dtype_codes, repeat=len(groups)):
            metas = {
                label: ArrayMeta(f"T{label}", shapes[members[0][1]], dtype_choice[label])
                for label, members in groups.items()
            }
            rows = tuple(
                tuple(metas[pattern[i * n + j]] for j in range(n)) for i in range(b)
            )
            for out in outs:
                yield BatchedEinsum(i_out=out, i_in=i_in, args=rows)


# ============================================================================
# CORPORA DE FORMAS
# ============================================================================

TCCG_EXTENTS = (8, 12, 16, 24, 32, 48, 64, 72)


def tccg_like(seed: int, max_indices: int = 6) -> BatchedEinsum:
    """Contração binária aleatória no estilo TCCG (n = 2, até ``max_indices`` índices)."""
    rng = np.random.default_rng(seed)
    total = int(rng.integers(3, max_indices + 1))
    symbols = list(LETTERS[:total])
    n_contracted = int(rng.integers(1, total - 1))
    contracted = symbols[:n_contracted]
    free = symbols[n_contracted:]
    split = int(rng.integers(1, len(free) + 1)) if len(free) > 1 else len(free)
    free_a, free_b = free[:split], free[split:]
    idx_a = tuple(rng.permutation(contracted + free_a).tolist())
    idx_b = tuple(rng.permutation(contracted + free_b).tolist())
    i_out = tuple(rng.permutation(free).tolist())
    length = {x: int(rng.choice(TCCG_EXTENTS)) for x in symbols}
    a = ArrayMeta("A", tuple(length[x] for x in idx_a), DtypeCode.FLOAT64)
    b = ArrayMeta("B", tuple(length[x] for x in idx_b), DtypeCode.FLOAT64)
    return ensure_valid(BatchedEinsum(i_out=i_out, i_in=(idx_a, idx_b), args=((a, b),)))


def face_mass(b: int, n_elements: int = 64, n_faces: int = 4,
              n_face_dofs: int = 6, n_vol_dofs: int = 10) -> BatchedEinsum:
    """Aplicações da matriz de massa de face: ``fe,ifj,fej->ei``."""
    jac = ArrayMeta("J", (n_faces, n_elements), DtypeCode.FLOAT64)
    mat = ArrayMeta("M", (n_vol_dofs, n_faces, n_face_dofs), DtypeCode.FLOAT64)
    rows = tuple(
        (jac, mat, ArrayMeta(f"F{k}", (n_faces, n_elements, n_face_dofs), DtypeCode.FLOAT64))
        for k in range(1, b + 1)
    )
    return ensure_valid(BatchedEinsum(
        i_out=("e", "i"), i_in=(("f", "e"), ("i", "f", "j"), ("f", "e", "j")), args=rows))


def local_divergence(b: int, n_elements: int = 64, dim: int = 3, n_vol_dofs: int = 10) -> BatchedEinsum:
    """Divergência local: ``xre,rij,ej->ei``."""
    jac = ArrayMeta("J", (dim, dim, n_elements), DtypeCode.FLOAT64)
    mat = ArrayMeta("D", (dim, n_vol_dofs, n_vol_dofs), DtypeCode.FLOAT64)
    rows = tuple(
        (jac, mat, ArrayMeta(f"u{k}", (n_elements, n_vol_dofs), DtypeCode.FLOAT64))
        for k in range(1, b + 1)
    )
    return ensure_valid(BatchedEinsum(
        i_out=("e", "i"), i_in=(("x", "r", "e"), ("r", "i", "j"), ("e", "j")), args=rows))


def local_gradient(b: int, n_elements: int = 64, dim: int = 3, n_vol_dofs: int = 10) -> BatchedEinsum:
    """Gradiente local: ``xre,rij,ej->xei``."""
    jac = ArrayMeta("J", (dim, dim, n_elements), DtypeCode.FLOAT64)
    mat = ArrayMeta("D", (dim, n_vol_dofs, n_vol_dofs), DtypeCode.FLOAT64)
    rows = tuple(
        (jac, mat, ArrayMeta(f"u{k}", (n_elements, n_vol_dofs), DtypeCode.FLOAT64))
        for k in range(1, b + 1)
    )
    return ensure_valid(BatchedEinsum(
        i_out=("x", "e", "i"), i_in=(("x", "r", "e"), ("r", "i", "j"), ("e", "j")), args=rows))
