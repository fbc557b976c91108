"""
einsum-canon - Rotulação Canônica de Grafos
===========================================
Rotulação canônica de grafos dirigidos com cores nos vértices, por
individualização e refinamento.

Refinamento: cada vértice recebe a assinatura (vizinhos de saída, vizinhos de
entrada) contada por célula da partição ordenada; células são divididas pelas
assinaturas (maior primeiro) até o ponto fixo. Quando a partição não é
discreta, cada vértice da primeira maior célula não unitária é
individualizado e a busca continua; vence a folha com o menor certificado
(cores, depois bits da adjacência em ordem de linhas).

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger("GraphCanon")


@dataclass(frozen=True, eq=False)
class ColoredDigraph:
    """Grafo dirigido com cores inteiras positivas nos vértices."""
    adjacency: np.ndarray
    colors: np.ndarray

    def __post_init__(self):
        adjacency = np.array(self.adjacency, dtype=bool)
        colors = np.array(self.colors, dtype=np.int64).reshape(-1)
        if adjacency.ndim != 2 or adjacency.shape != (colors.size, colors.size):
            raise ValueError(
                f"adjacência {adjacency.shape} incompatível com {colors.size} cores")
        adjacency.setflags(write=False)
        colors.setflags(write=False)
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "colors", colors)

    @property
    def n(self) -> int:
        return int(self.colors.size)

    def preds(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[:, v])

    def succs(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[v])

    def same_graph(self, other: "ColoredDigraph") -> bool:
        """Igualdade entrada a entrada de cores e adjacência."""
        return (
            self.n == other.n
            and np.array_equal(self.colors, other.colors)
            and np.array_equal(self.adjacency, other.adjacency)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColoredDigraph):
            return NotImplemented
        return self.same_graph(other)

    __hash__ = None

    def _relabeled_extras(self, perm: np.ndarray) -> Dict:
        """Campos adicionais reindexados por ``apply_relabeling`` (subclasses)."""
        return {}


@dataclass(frozen=True)
class Relabeling:
    """Bijeção de vértices: o vértice ``v`` passa a ser ``perm[v]`` (0-based)."""
    perm: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    def inverse(self) -> "Relabeling":
        inv = [0] * len(self.perm)
        for v, p in enumerate(self.perm):
            inv[p] = v
        return Relabeling(tuple(inv))

    def compose(self, then: "Relabeling") -> "Relabeling":
        """Aplica ``self`` e depois ``then``."""
        return Relabeling(tuple(then.perm[p] for p in self.perm))

    @classmethod
    def identity(cls, n: int) -> "Relabeling":
        return cls(tuple(range(n)))


def apply_relabeling(g: ColoredDigraph, r: Relabeling) -> ColoredDigraph:
    """
    Reindexa ``g``: ``A'[r(i), r(j)] = A[i, j]`` e ``c'[r(i)] = c[i]``.

    Subclasses (grafo induzido) também reindexam seus mapas parciais.
    """
    if r.n != g.n:
        raise ValueError(f"relabeling de tamanho {r.n} para grafo com {g.n} vértices")
    perm = np.asarray(r.perm, dtype=np.int64)
    if g.n and not np.array_equal(np.sort(perm), np.arange(g.n)):
        raise ValueError("relabeling não é uma bijeção")
    order = np.empty(g.n, dtype=np.int64)
    order[perm] = np.arange(g.n)
    adjacency = g.adjacency[np.ix_(order, order)]
    colors = g.colors[order]
    return replace(g, adjacency=adjacency, colors=colors, **g._relabeled_extras(perm))


# ============================================================================
# BUSCA
# ============================================================================

class _CanonicalSearch:
    """Estado da busca de individualização-refinamento para um grafo."""

    def __init__(self, g: ColoredDigraph, prune_automorphisms: bool):
        self.n = g.n
        self.adj = g.adjacency.astype(np.int64)
        self.adj_t = np.ascontiguousarray(self.adj.T)
        self.adj_bits = g.adjacency.astype(np.uint8)
        self.prune = prune_automorphisms
        self.best_cert: Optional[bytes] = None
        self.best_order: Optional[np.ndarray] = None
        self.automorphisms: List[np.ndarray] = []
        self.leaves = 0

    def initial_partition(self, colors: np.ndarray) -> List[np.ndarray]:
        # cores normalizadas para 0..k-1 pela ordem dos valores
        _, ranks = np.unique(colors, return_inverse=True)
        ranks = ranks.reshape(-1)
        return [np.flatnonzero(ranks == r) for r in range(int(ranks.max()) + 1)] if self.n else []

    def refine(self, cells: List[np.ndarray]) -> List[np.ndarray]:
        while True:
            membership = np.zeros((self.n, len(cells)), dtype=np.int64)
            for c, cell in enumerate(cells):
                membership[cell, c] = 1
            signature = np.empty((self.n, 2 * len(cells)), dtype=np.int64)
            signature[:, 0::2] = self.adj @ membership
            signature[:, 1::2] = self.adj_t @ membership

            refined: List[np.ndarray] = []
            split = False
            for cell in cells:
                if cell.size == 1:
                    refined.append(cell)
                    continue
                keys, inverse = np.unique(signature[cell], axis=0, return_inverse=True)
                if keys.shape[0] == 1:
                    refined.append(cell)
                    continue
                split = True
                inverse = inverse.reshape(-1)
                for k in range(keys.shape[0] - 1, -1, -1):
                    refined.append(cell[inverse == k])
            cells = refined
            if not split:
                return cells

    @staticmethod
    def target_cell(cells: List[np.ndarray]) -> Optional[int]:
        best, best_size = None, 1
        for c, cell in enumerate(cells):
            if cell.size > best_size:
                best, best_size = c, cell.size
        return best

    def search(self, cells: List[np.ndarray], path: Tuple[int, ...]) -> None:
        target = self.target_cell(cells)
        if target is None:
            self.leaf(np.concatenate(cells) if cells else np.zeros(0, dtype=np.int64))
            return
        cell = cells[target]
        explored: List[int] = []
        for v in cell.tolist():
            if self.prune and explored and self.in_explored_orbit(v, explored, path):
                continue
            explored.append(v)
            rest = cell[cell != v]
            child = cells[:target] + [np.array([v]), rest] + cells[target + 1:]
            self.search(self.refine(child), path + (v,))

    def leaf(self, order: np.ndarray) -> None:
        self.leaves += 1
        canon = self.adj_bits[np.ix_(order, order)]
        cert = np.packbits(canon, axis=None).tobytes()
        if self.best_cert is None or cert < self.best_cert:
            self.best_cert, self.best_order = cert, order
        elif cert == self.best_cert and self.prune:
            gamma = np.empty(self.n, dtype=np.int64)
            gamma[order] = self.best_order
            if not np.array_equal(gamma, np.arange(self.n)):
                self.automorphisms.append(gamma)

    def in_explored_orbit(self, v: int, explored: List[int], path: Tuple[int, ...]) -> bool:
        """Se ``v`` está na órbita de um vértice já explorado sob automorfismos que fixam ``path``."""
        generators = [g for g in self.automorphisms if all(g[p] == p for p in path)]
        if not generators:
            return False
        targets = set(explored)
        orbit, frontier = {v}, [v]
        while frontier:
            u = frontier.pop()
            for gamma in generators:
                w = int(gamma[u])
                if w in targets:
                    return True
                if w not in orbit:
                    orbit.add(w)
                    frontier.append(w)
        return False


def canonical_labeling(g: ColoredDigraph, prune_automorphisms: bool = True) -> Relabeling:
    """
    Calcula a rotulação canônica de ``g``.

    Args:
        g: grafo colorido
        prune_automorphisms: poda subárvores equivalentes por automorfismos já
            descobertos; o grafo canônico é o mesmo com ou sem poda.

    Returns:
        ``Relabeling`` tal que ``apply_relabeling(g, r)`` é a forma canônica.
    """
    search = _CanonicalSearch(g, prune_automorphisms)
    if g.n == 0:
        return Relabeling(())
    cells = search.refine(search.initial_partition(g.colors))
    search.search(cells, ())
    perm = np.empty(g.n, dtype=np.int64)
    perm[search.best_order] = np.arange(g.n)
    logger.debug(
        f"[GRAPH] {g.n} vértices, {search.leaves} folha(s), "
        f"{len(search.automorphisms)} automorfismo(s)")
    return Relabeling(tuple(int(p) for p in perm))


def canonical_form(g: ColoredDigraph, prune_automorphisms: bool = True) -> ColoredDigraph:
    """Forma canônica de ``g``."""
    return apply_relabeling(g, canonical_labeling(g, prune_automorphisms))


def certificate(g: ColoredDigraph) -> Tuple[Tuple[int, ...], bytes]:
    """Certificado da forma canônica: (cores, bits da adjacência)."""
    canon = canonical_form(g)
    bits = np.packbits(canon.adjacency.astype(np.uint8), axis=None).tobytes()
    return tuple(int(c) for c in canon.colors), bits


def permute_graph(g: ColoredDigraph, perm: Sequence[int]) -> ColoredDigraph:
    """Atalho: ``apply_relabeling`` a partir de uma sequência."""
    return apply_relabeling(g, Relabeling(tuple(int(p) for p in perm)))
