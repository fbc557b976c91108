"""
einsum-canon - Canonicalização
==============================
Forma canônica de einsums em lote (grafo induzido -> rotulação canônica ->
reconstrução), testemunhas de isomorfismo e um oráculo de força bruta.

Convenção das testemunhas ``W(e1, e2)``:
- ``sigma_i``: linha de e1 -> linha de e2 (1-based)
- ``sigma_j``: posição de e1 -> posição de e2 (1-based)
- ``sigma_idx``: índice de e2 -> índice de e1
- ``sigma_arg``: array de e2 -> array de e1

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from .batched_einsum import BatchedEinsum, ensure_valid, equals
from .errors import BudgetExceededError
from .graph_canon import apply_relabeling, canonical_labeling
from .induced_graph import (
    default_arg_name,
    default_index_name,
    to_batched_einsum,
    to_induced_graph,
)

logger = logging.getLogger("Canonicalizer")

DEFAULT_BRUTE_FORCE_BUDGET = 10 ** 7


def _inverse(mapping: Mapping) -> Dict:
    return {v: k for k, v in mapping.items()}


@dataclass(frozen=True)
class SubstitutionWitness:
    """As quatro bijeções que testemunham ``e1 ≃ e2``."""
    sigma_i: Dict[int, int] = field(default_factory=dict)
    sigma_j: Dict[int, int] = field(default_factory=dict)
    sigma_idx: Dict[str, str] = field(default_factory=dict)
    sigma_arg: Dict[str, str] = field(default_factory=dict)

    def inverse(self) -> "SubstitutionWitness":
        """Testemunha de ``e2 ≃ e1``."""
        return SubstitutionWitness(
            sigma_i=_inverse(self.sigma_i),
            sigma_j=_inverse(self.sigma_j),
            sigma_idx=_inverse(self.sigma_idx),
            sigma_arg=_inverse(self.sigma_arg),
        )

    @classmethod
    def identity(cls, e: BatchedEinsum) -> "SubstitutionWitness":
        return cls(
            sigma_i={i: i for i in range(1, e.b + 1)},
            sigma_j={j: j for j in range(1, e.n + 1)},
            sigma_idx={x: x for x in e.all_indices},
            sigma_arg={a: a for a in e.arg_names},
        )

    def to_lines(self) -> List[str]:
        lines = [f"row: {k} -> {v}" for k, v in sorted(self.sigma_i.items())]
        lines += [f"slot: {k} -> {v}" for k, v in sorted(self.sigma_j.items())]
        lines += [f"idx: {k} -> {v}" for k, v in sorted(self.sigma_idx.items())]
        lines += [f"arg: {k} -> {v}" for k, v in sorted(self.sigma_arg.items())]
        return lines

    def to_dict(self) -> Dict:
        return {
            "sigma_i": dict(self.sigma_i),
            "sigma_j": dict(self.sigma_j),
            "sigma_idx": dict(self.sigma_idx),
            "sigma_arg": dict(self.sigma_arg),
        }


@dataclass(frozen=True)
class CanonResult:
    """
    Resultado da canonicalização.

    ``sigma_arg``/``sigma_idx`` levam nomes canônicos aos originais;
    ``sigma_row``/``sigma_slot`` levam linhas/posições originais às canônicas.
    """
    canonical: BatchedEinsum
    sigma_arg: Dict[str, str]
    sigma_idx: Dict[str, str]
    sigma_row: Dict[int, int]
    sigma_slot: Dict[int, int]

    @property
    def witness(self) -> SubstitutionWitness:
        """Testemunha ``W(original, canônico)``."""
        return SubstitutionWitness(
            sigma_i=dict(self.sigma_row),
            sigma_j=dict(self.sigma_slot),
            sigma_idx=dict(self.sigma_idx),
            sigma_arg=dict(self.sigma_arg),
        )

    def to_dict(self) -> Dict:
        return {"canonical": self.canonical.to_dict(), **self.witness.to_dict()}


def canonicalize(
    e: BatchedEinsum,
    index_name: Callable[[int], str] = default_index_name,
    arg_name: Callable[[int], str] = default_arg_name,
    prune_automorphisms: bool = True,
) -> CanonResult:
    """
    Canonicaliza ``e``: ``e ≃ e'`` se e somente se as formas canônicas são iguais.

    Args:
        e: einsum válido
        index_name: k -> nome do k-ésimo índice canônico
        arg_name: k -> nome do k-ésimo argumento canônico
        prune_automorphisms: repassado à rotulação canônica

    Returns:
        ``CanonResult``; para entrada já canônica as sigmas são identidades.
    """
    ensure_valid(e)
    graph = to_induced_graph(e)
    relabeled = apply_relabeling(graph, canonical_labeling(graph, prune_automorphisms))
    rec = to_batched_einsum(relabeled, index_name, arg_name)
    canonical = rec.einsum

    if equals(canonical, e):
        identity = SubstitutionWitness.identity(e)
        return CanonResult(canonical, identity.sigma_arg, identity.sigma_idx,
                           identity.sigma_i, identity.sigma_j)

    sigma_idx = {
        index_name(rec.iota_index_inferred[v]): original
        for v, original in relabeled.iota_index.items()
    }
    sigma_arg = {
        arg_name(rec.iota_arg_inferred[v]): original
        for v, original in relabeled.iota_arg.items()
    }
    sigma_row = {
        original + 1: rec.iota_output_inferred[v] for v, original in relabeled.iota_output.items()
    }
    sigma_slot = {
        original + 1: rec.iota_arg_pos_inferred[v] for v, original in relabeled.iota_arg_pos.items()
    }
    logger.debug(f"[CANON] {e.subscripts} -> {canonical.subscripts}")
    return CanonResult(canonical, sigma_arg, sigma_idx, sigma_row, sigma_slot)


def compose_witness(c1: CanonResult, c2: CanonResult) -> SubstitutionWitness:
    """``W(e1, e2)`` a partir de ``W(e1, C)`` e ``W(e2, C)`` com a mesma forma canônica ``C``."""
    inv_row2 = _inverse(c2.sigma_row)
    inv_slot2 = _inverse(c2.sigma_slot)
    inv_idx2 = _inverse(c2.sigma_idx)
    inv_arg2 = _inverse(c2.sigma_arg)
    return SubstitutionWitness(
        sigma_i={i: inv_row2[c] for i, c in c1.sigma_row.items()},
        sigma_j={j: inv_slot2[c] for j, c in c1.sigma_slot.items()},
        sigma_idx={x: c1.sigma_idx[inv_idx2[x]] for x in c2.sigma_idx.values()},
        sigma_arg={a: c1.sigma_arg[inv_arg2[a]] for a in c2.sigma_arg.values()},
    )


def is_isomorphic(e1: BatchedEinsum, e2: BatchedEinsum) -> Optional[SubstitutionWitness]:
    """
    Testemunha de ``e1 ≃ e2`` pelas formas canônicas, ou ``None``.
    """
    if (e1.b, e1.n) != (e2.b, e2.n):
        return None
    c1, c2 = canonicalize(e1), canonicalize(e2)
    if not equals(c1.canonical, c2.canonical):
        return None
    return compose_witness(c1, c2)


# ============================================================================
# VERIFICAÇÃO E FORÇA BRUTA
# ============================================================================

def _is_bijection(mapping: Mapping, domain, codomain) -> bool:
    return (
        set(mapping) == set(domain)
        and set(mapping.values()) == set(codomain)
        and len(set(mapping.values())) == len(mapping)
    )


def witness_failures(e1: BatchedEinsum, e2: BatchedEinsum, w: SubstitutionWitness) -> List[str]:
    """Lista as condições de isomorfismo que ``w`` não satisfaz."""
    if (e1.b, e1.n) != (e2.b, e2.n):
        return ["b/n diferentes"]
    failures = []
    if not _is_bijection(w.sigma_i, range(1, e1.b + 1), range(1, e2.b + 1)):
        failures.append("sigma_i não é bijeção em 1..b")
    if not _is_bijection(w.sigma_j, range(1, e1.n + 1), range(1, e2.n + 1)):
        failures.append("sigma_j não é bijeção em 1..n")
    if not _is_bijection(w.sigma_idx, e2.all_indices, e1.all_indices):
        failures.append("sigma_idx não é bijeção entre os índices")
    if not _is_bijection(w.sigma_arg, e2.arg_names, e1.arg_names):
        failures.append("sigma_arg não é bijeção entre os arrays")
    if failures:
        return failures

    if e1.i_out != tuple(w.sigma_idx[x] for x in e2.i_out):
        failures.append("lista de saída não corresponde")
    for j in range(1, e1.n + 1):
        if e1.i_in[j - 1] != tuple(w.sigma_idx[x] for x in e2.i_in[w.sigma_j[j] - 1]):
            failures.append(f"lista de índices da posição {j} não corresponde")
    for i in range(1, e1.b + 1):
        for j in range(1, e1.n + 1):
            a1 = e1.args[i - 1][j - 1]
            a2 = e2.args[w.sigma_i[i] - 1][w.sigma_j[j] - 1]
            if a1.name != w.sigma_arg[a2.name]:
                failures.append(f"argumento ({i}, {j}): {a1.name} != sigma({a2.name})")
            if a1.shape != a2.shape or a1.dtype != a2.dtype:
                failures.append(f"argumento ({i}, {j}): shape/dtype diferentes")
    return failures


def verify_witness(e1: BatchedEinsum, e2: BatchedEinsum, w: SubstitutionWitness) -> bool:
    """True se ``w`` testemunha ``e1 ≃ e2``."""
    failures = witness_failures(e1, e2, w)
    if failures:
        logger.debug(f"[CANON] testemunha rejeitada: {failures[0]}")
    return not failures


def brute_force_isomorphic(
    e1: BatchedEinsum,
    e2: BatchedEinsum,
    budget: int = DEFAULT_BRUTE_FORCE_BUDGET,
) -> Optional[SubstitutionWitness]:
    """
    Busca exaustiva de testemunha, aplicando as definições literalmente.

    Percorre todas as combinações de ``sigma_j``, ``sigma_idx`` e ``sigma_i``;
    ``sigma_arg`` fica determinada pelas igualdades de argumentos, e cada
    candidata completa passa por ``verify_witness``.

    Raises:
        BudgetExceededError: ``b!·n!·|I|!·|A|!`` maior que ``budget``
    """
    if (e1.b, e1.n, len(e1.all_indices), len(e1.arg_names)) != \
            (e2.b, e2.n, len(e2.all_indices), len(e2.arg_names)):
        return None
    candidates = (
        math.factorial(e1.b) * math.factorial(e1.n)
        * math.factorial(len(e1.all_indices)) * math.factorial(len(e1.arg_names))
    )
    if candidates > budget:
        raise BudgetExceededError(f"{candidates} candidatos excedem o orçamento {budget}")

    rows = range(1, e1.b + 1)
    slots = range(1, e1.n + 1)
    idx2 = e2.all_indices
    for slot_perm in itertools.permutations(slots):
        sigma_j = dict(zip(slots, slot_perm))
        for idx_perm in itertools.permutations(e1.all_indices):
            sigma_idx = dict(zip(idx2, idx_perm))
            if e1.i_out != tuple(sigma_idx[x] for x in e2.i_out):
                continue
            if any(e1.i_in[j - 1] != tuple(sigma_idx[x] for x in e2.i_in[sigma_j[j] - 1])
                   for j in slots):
                continue
            for row_perm in itertools.permutations(rows):
                sigma_i = dict(zip(rows, row_perm))
                sigma_arg = _forced_arg_map(e1, e2, sigma_i, sigma_j)
                if sigma_arg is None:
                    continue
                w = SubstitutionWitness(sigma_i, sigma_j, sigma_idx, sigma_arg)
                if verify_witness(e1, e2, w):
                    return w
    return None


def _forced_arg_map(e1, e2, sigma_i, sigma_j) -> Optional[Dict[str, str]]:
    sigma_arg: Dict[str, str] = {}
    for i, row in enumerate(e1.args, start=1):
        for j, a1 in enumerate(row, start=1):
            a2 = e2.args[sigma_i[i] - 1][sigma_j[j] - 1]
            if sigma_arg.setdefault(a2.name, a1.name) != a1.name:
                return None
    return sigma_arg


def rebind_bindings(w: SubstitutionWitness, bindings_e1: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """Bindings de e2 a partir dos de e1: ``X -> bindings_e1[sigma_arg[X]]``."""
    return {x: bindings_e1[a] for x, a in w.sigma_arg.items()}
