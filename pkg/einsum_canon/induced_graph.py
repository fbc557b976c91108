"""
einsum-canon - Grafo Induzido
=============================
Codificação de um einsum em lote como grafo dirigido colorido, verificação
das condições de conformidade de grafos arbitrários e reconstrução do
einsum a partir de um grafo conforme.

Blocos de vértices (na ordem das cores 1..9):
- argumentos, índices, acessos de entrada, acessos de saída,
  saídas (linhas), posições de argumento, dtypes, comprimentos, dimensões

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Dict, List, Mapping, Optional, Set, Tuple

import numpy as np

from .batched_einsum import ArrayMeta, BatchedEinsum, DtypeCode, ensure_valid
from .errors import ComplianceError, EncodingError, NameCollisionError
from .graph_canon import ColoredDigraph

logger = logging.getLogger("InducedGraph")


class NodeColor(IntEnum):
    """Cor de cada bloco de vértices."""
    ARG = 1
    INDEX = 2
    ACCESS_IN = 3
    ACCESS_OUT = 4
    OUTPUT = 5
    ARG_POS = 6
    DTYPE = 7
    LENGTH = 8
    DIM = 9


DOT_COLORS = {
    NodeColor.ARG: "deepskyblue",
    NodeColor.INDEX: "dodgerblue4",
    NodeColor.ACCESS_IN: "darkseagreen1",
    NodeColor.ACCESS_OUT: "forestgreen",
    NodeColor.OUTPUT: "darksalmon",
    NodeColor.ARG_POS: "crimson",
    NodeColor.DTYPE: "navajowhite",
    NodeColor.LENGTH: "orange",
    NodeColor.DIM: "thistle",
}


def _rekey(mapping: Mapping[int, object], perm: np.ndarray) -> Dict[int, object]:
    return {int(perm[node]): value for node, value in mapping.items()}


@dataclass(frozen=True, eq=False)
class InducedGraph(ColoredDigraph):
    """
    Grafo induzido por um einsum em lote.

    Os mapas parciais são indexados pelo vértice: ``iota_dtype`` nos vértices
    de cor 7, ``iota_length`` nos de cor 8, ``iota_index`` nos de cor 2 e
    ``iota_arg`` nos de cor 1. ``iota_output`` (linha, 0-based) e
    ``iota_arg_pos`` (posição, 0-based) guardam a numeração de origem das
    linhas e posições.
    """
    iota_dtype: Mapping[int, DtypeCode] = field(default_factory=dict)
    iota_length: Mapping[int, int] = field(default_factory=dict)
    iota_index: Mapping[int, str] = field(default_factory=dict)
    iota_arg: Mapping[int, str] = field(default_factory=dict)
    iota_output: Mapping[int, int] = field(default_factory=dict)
    iota_arg_pos: Mapping[int, int] = field(default_factory=dict)

    def nodes_of(self, color: NodeColor) -> np.ndarray:
        return np.flatnonzero(self.colors == int(color))

    def _relabeled_extras(self, perm: np.ndarray) -> Dict:
        return {
            "iota_dtype": _rekey(self.iota_dtype, perm),
            "iota_length": _rekey(self.iota_length, perm),
            "iota_index": _rekey(self.iota_index, perm),
            "iota_arg": _rekey(self.iota_arg, perm),
            "iota_output": _rekey(self.iota_output, perm),
            "iota_arg_pos": _rekey(self.iota_arg_pos, perm),
        }

    def same_graph(self, other: ColoredDigraph) -> bool:
        if not super().same_graph(other):
            return False
        if not isinstance(other, InducedGraph):
            return True
        return (
            dict(self.iota_dtype) == dict(other.iota_dtype)
            and dict(self.iota_length) == dict(other.iota_length)
            and dict(self.iota_index) == dict(other.iota_index)
            and dict(self.iota_arg) == dict(other.iota_arg)
        )


# ============================================================================
# CODIFICAÇÃO
# ============================================================================

def to_induced_graph(e: BatchedEinsum, rng: Optional[np.random.Generator] = None) -> InducedGraph:
    """
    Constrói o grafo induzido de ``e``.

    Dentro de cada bloco os vértices são numerados pela primeira ocorrência
    no percurso linha a linha da matriz de argumentos (depois por dimensão).
    Com ``rng`` a numeração dentro de cada bloco é embaralhada; a forma
    canônica não depende dela.

    Raises:
        ValidationError: ``e`` inválido
        EncodingError: operando escalar (sem dimensões, logo sem acessos);
            aceito por ``validate`` e ``evaluate``, mas não canonicalizável
    """
    ensure_valid(e)
    for row in e.args:
        for arg in row:
            if arg.dim == 0:
                raise EncodingError(
                    f"operando {arg.name} é escalar: operandos escalares não são suportados na canonicalização")

    args = list(e.arg_names)
    indices = list(e.all_indices)
    accesses_in = [
        (i, j, x, d)
        for i in range(e.b)
        for j, idx in enumerate(e.i_in)
        for d, x in enumerate(idx)
    ]
    accesses_out = [(x, d) for d, x in enumerate(e.i_out)]
    outputs = list(range(e.b))
    positions = list(range(e.n))
    dtypes = sorted({a.dtype for a in e.universe}, key=lambda dt: dt.rank)
    lengths = sorted(set(e.index_to_length.values()))
    n_dim = max([a.dim for a in e.universe] + [len(e.i_out)])
    dims = list(range(n_dim))

    blocks = [args, indices, accesses_in, accesses_out, outputs, positions, dtypes, lengths, dims]
    if rng is not None:
        blocks = [[block[k] for k in rng.permutation(len(block))] for block in blocks]

    node: List[Dict] = []
    colors: List[int] = []
    offset = 0
    for color, block in zip(NodeColor, blocks):
        node.append({item: offset + k for k, item in enumerate(block)})
        colors.extend([int(color)] * len(block))
        offset += len(block)
    n_arg, n_index, n_acc_in, n_acc_out, n_out, n_pos, n_dtype, n_length, n_dims = node

    adjacency = np.zeros((offset, offset), dtype=bool)
    for (i, j, x, d), v in n_acc_in.items():
        adjacency[v, n_arg[e.args[i][j].name]] = True
        adjacency[n_pos[j], v] = True
        adjacency[n_out[i], v] = True
        adjacency[n_index[x], v] = True
        adjacency[n_dims[d], v] = True
    for (x, d), v in n_acc_out.items():
        adjacency[n_index[x], v] = True
        adjacency[n_dims[d], v] = True
    for x, length in e.index_to_length.items():
        adjacency[n_length[length], n_index[x]] = True
    for meta in e.universe:
        adjacency[n_dtype[meta.dtype], n_arg[meta.name]] = True
    for l1 in lengths:
        for l2 in lengths:
            if l1 < l2:
                adjacency[n_length[l1], n_length[l2]] = True
    for t1 in dtypes:
        for t2 in dtypes:
            if t1.rank < t2.rank:
                adjacency[n_dtype[t1], n_dtype[t2]] = True
    for d1 in dims:
        for d2 in dims:
            if d1 < d2:
                adjacency[n_dims[d1], n_dims[d2]] = True

    g = InducedGraph(
        adjacency=adjacency,
        colors=np.array(colors, dtype=np.int64),
        iota_dtype={v: dt for dt, v in n_dtype.items()},
        iota_length={v: length for length, v in n_length.items()},
        iota_index={v: x for x, v in n_index.items()},
        iota_arg={v: name for name, v in n_arg.items()},
        iota_output={v: i for i, v in n_out.items()},
        iota_arg_pos={v: j for j, v in n_pos.items()},
    )
    logger.debug(f"[GRAPH] {e.subscripts} (b={e.b}) -> {g.n} vértices, {int(adjacency.sum())} arestas")
    return g


def expected_node_count(e: BatchedEinsum) -> int:
    """Número de vértices do grafo induzido, pela fórmula dos blocos."""
    n_dim = max([a.dim for a in e.universe] + [len(e.i_out)])
    return (
        len(e.universe)
        + len(e.all_indices)
        + len({a.dtype for a in e.universe})
        + len(set(e.index_to_length.values()))
        + n_dim
        + e.b * sum(len(idx) for idx in e.i_in)
        + len(e.i_out)
        + e.b
        + e.n
    )


# ============================================================================
# CONFORMIDADE
# ============================================================================

@dataclass(frozen=True)
class ComplianceViolation:
    """Condição de conformidade violada e os vértices que a testemunham."""
    condition: str
    message: str
    nodes: Tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.condition}: {self.message} {list(self.nodes)}"

    def to_dict(self) -> Dict:
        return {"condition": self.condition, "message": self.message, "nodes": list(self.nodes)}


class _Blocks:
    """Conjuntos de vértices por cor e vizinhanças de um grafo."""

    def __init__(self, g: ColoredDigraph):
        self.g = g
        self.by_color: Dict[NodeColor, Set[int]] = {
            color: set(np.flatnonzero(g.colors == int(color)).tolist()) for color in NodeColor
        }
        self._preds = [set(g.preds(v).tolist()) for v in range(g.n)]
        self._succs = [set(g.succs(v).tolist()) for v in range(g.n)]

    def __getitem__(self, color: NodeColor) -> Set[int]:
        return self.by_color[color]

    def preds(self, v: int) -> Set[int]:
        return self._preds[v]

    def succs(self, v: int) -> Set[int]:
        return self._succs[v]

    def only(self, nodes: Set[int]) -> Optional[int]:
        return next(iter(nodes)) if len(nodes) == 1 else None

    def inferred_dim(self, v: int) -> int:
        return 1 + len(self._preds[v] & self.by_color[NodeColor.DIM])


def check_compliance(g: InducedGraph) -> List[ComplianceViolation]:
    """
    Avalia todas as condições de conformidade de ``g``.

    Returns:
        Lista (vazia se conforme) com todas as condições violadas.
    """
    out: List[ComplianceViolation] = []

    def fail(condition: str, message: str, nodes) -> None:
        out.append(ComplianceViolation(condition, message, tuple(sorted(int(v) for v in nodes))))

    bad_colors = [v for v in range(g.n) if not 1 <= int(g.colors[v]) <= 9]
    if bad_colors:
        fail("color_range", "cores fora de 1..9", bad_colors)

    blk = _Blocks(g)
    V_ARG, V_INDEX = blk[NodeColor.ARG], blk[NodeColor.INDEX]
    V_IN, V_OUTACC = blk[NodeColor.ACCESS_IN], blk[NodeColor.ACCESS_OUT]
    V_OUT, V_POS = blk[NodeColor.OUTPUT], blk[NodeColor.ARG_POS]
    V_DTYPE, V_LENGTH, V_DIM = blk[NodeColor.DTYPE], blk[NodeColor.LENGTH], blk[NodeColor.DIM]

    def check_all(condition: str, message: str, nodes: Set[int], ok) -> None:
        bad = [v for v in nodes if not ok(v)]
        if bad:
            fail(condition, message, bad)

    # argumentos
    check_all("arg_successors", "argumento não pode ter sucessores", V_ARG,
              lambda v: not blk.succs(v))
    check_all("arg_predecessors", "predecessores de argumento devem ser acessos ou dtypes", V_ARG,
              lambda v: blk.preds(v) <= V_IN | V_DTYPE)
    check_all("arg_dtype", "argumento precisa de exatamente um dtype", V_ARG,
              lambda v: len(blk.preds(v) & V_DTYPE) == 1)
    # dtypes
    check_all("dtype_predecessors", "predecessores de dtype devem ser dtypes", V_DTYPE,
              lambda v: blk.preds(v) <= V_DTYPE)
    check_all("dtype_successors", "sucessores de dtype devem ser argumentos ou dtypes", V_DTYPE,
              lambda v: blk.succs(v) <= V_ARG | V_DTYPE)
    # acessos de entrada
    check_all("access_in_successors", "acesso de entrada aponta apenas para argumentos", V_IN,
              lambda v: blk.succs(v) <= V_ARG)
    check_all("access_in_predecessors",
              "acesso de entrada precisa de exatamente quatro predecessores "
              "(posição, índice, saída, dimensão)", V_IN,
              lambda v: len(blk.preds(v)) == 4 and all(
                  len(blk.preds(v) & block) == 1 for block in (V_POS, V_INDEX, V_OUT, V_DIM)))
    # saídas
    check_all("output_successors", "saída aponta apenas para acessos de entrada", V_OUT,
              lambda v: blk.succs(v) <= V_IN)
    check_all("output_predecessors", "saída não tem predecessores", V_OUT,
              lambda v: not blk.preds(v))
    if not V_OUT:
        fail("no_output", "o bloco de saídas está vazio", [])
    # acessos de saída
    check_all("access_out_successors", "acesso de saída não tem sucessores", V_OUTACC,
              lambda v: not blk.succs(v))
    check_all("access_out_predecessors",
              "acesso de saída precisa de exatamente dois predecessores (índice, dimensão)", V_OUTACC,
              lambda v: len(blk.preds(v)) == 2 and len(blk.preds(v) & V_INDEX) == 1
              and len(blk.preds(v) & V_DIM) == 1)
    # índices
    check_all("index_successors", "índice aponta apenas para acessos", V_INDEX,
              lambda v: blk.succs(v) <= V_IN | V_OUTACC)
    check_all("index_length", "índice precisa de exatamente um predecessor, um comprimento", V_INDEX,
              lambda v: len(blk.preds(v)) == 1 and len(blk.preds(v) & V_LENGTH) == 1)
    # comprimentos e dimensões
    check_all("length_predecessors", "predecessores de comprimento devem ser comprimentos", V_LENGTH,
              lambda v: blk.preds(v) <= V_LENGTH)
    check_all("length_successors", "sucessores de comprimento devem ser índices ou comprimentos",
              V_LENGTH, lambda v: blk.succs(v) <= V_INDEX | V_LENGTH)
    check_all("dim_predecessors", "predecessores de dimensão devem ser dimensões", V_DIM,
              lambda v: blk.preds(v) <= V_DIM)
    check_all("dim_successors", "sucessores de dimensão devem ser acessos ou dimensões", V_DIM,
              lambda v: blk.succs(v) <= V_IN | V_OUTACC | V_DIM)
    # posições
    check_all("arg_pos_predecessors", "posição não tem predecessores", V_POS,
              lambda v: not blk.preds(v))
    check_all("arg_pos_successors", "posição aponta apenas para acessos de entrada", V_POS,
              lambda v: blk.succs(v) <= V_IN)

    # torneios transitivos
    _check_tournament(blk, V_DIM, "dim_tournament", None, fail)
    _check_tournament(blk, V_LENGTH, "length_tournament",
                      lambda v: getattr(g, "iota_length", {}).get(v), fail)
    _check_tournament(blk, V_DTYPE, "dtype_tournament",
                      lambda v: _dtype_rank(getattr(g, "iota_dtype", {}).get(v)), fail)

    _check_iota_domains(g, blk, fail)

    if out:
        # as condições restantes assumem a vizinhança local correta
        return out

    _check_access_structure(g, blk, fail)
    return out


def _dtype_rank(dtype: Optional[DtypeCode]) -> Optional[int]:
    return dtype.rank if dtype is not None else None


def _check_tournament(blk: _Blocks, nodes: Set[int], condition: str,
                      value: Optional[Callable[[int], Optional[int]]], fail) -> None:
    ordered = sorted(nodes)
    adj = blk.g.adjacency
    for pos, u in enumerate(ordered):
        if adj[u, u]:
            fail(condition, "laço no bloco", [u])
        for w in ordered[pos + 1:]:
            if adj[u, w] == adj[w, u]:
                fail(condition, "par sem exatamente uma aresta", [u, w])
                return
    scores = sorted(len(blk.preds(v) & nodes) for v in ordered)
    if scores != list(range(len(ordered))):
        fail(condition, "ordem do bloco não é transitiva", ordered)
        return
    if value is None:
        return
    values = {v: value(v) for v in ordered}
    if any(val is None for val in values.values()):
        return
    for u in ordered:
        for w in ordered:
            if u != w and adj[u, w] and not values[u] < values[w]:
                fail(condition, "ordem do bloco inconsistente com os valores", [u, w])
                return


def _check_iota_domains(g: ColoredDigraph, blk: _Blocks, fail) -> None:
    domains = (
        ("iota_dtype", NodeColor.DTYPE),
        ("iota_length", NodeColor.LENGTH),
        ("iota_index", NodeColor.INDEX),
        ("iota_arg", NodeColor.ARG),
    )
    for attr, color in domains:
        mapping = getattr(g, attr, None)
        if mapping is None:
            fail("iota_domain", f"{attr} ausente", blk[color])
            continue
        if set(mapping) != blk[color]:
            fail("iota_domain", f"{attr} deve estar definido exatamente na cor {int(color)}",
                 set(mapping) ^ blk[color])


def _check_access_structure(g: InducedGraph, blk: _Blocks, fail) -> None:
    V_ARG, V_INDEX, V_IN = blk[NodeColor.ARG], blk[NodeColor.INDEX], blk[NodeColor.ACCESS_IN]
    V_OUTACC, V_OUT, V_POS = blk[NodeColor.ACCESS_OUT], blk[NodeColor.OUTPUT], blk[NodeColor.ARG_POS]
    V_DIM, V_LENGTH = blk[NodeColor.DIM], blk[NodeColor.LENGTH]

    def part(v: int, block: Set[int]) -> int:
        return blk.only(blk.preds(v) & block)

    length_of = {x: part(x, V_LENGTH) for x in V_INDEX}

    # índices de saída aparecem em alguma entrada
    unused = [v for v in V_OUTACC if not blk.succs(part(v, V_INDEX)) & V_IN]
    if unused:
        fail("output_index_unused", "índice de saída sem acesso de entrada", unused)

    # acessos únicos por (índice, dimensão, posição, saída)
    keys: Dict[Tuple[int, int, int, int], int] = {}
    for v in V_IN:
        key = (part(v, V_INDEX), part(v, V_DIM), part(v, V_POS), part(v, V_OUT))
        if key in keys:
            fail("duplicate_access", "acesso de entrada duplicado", [keys[key], v])
        keys[key] = v
    out_keys: Dict[Tuple[int, int], int] = {}
    out_indices: Dict[int, int] = {}
    for v in V_OUTACC:
        x, d = part(v, V_INDEX), part(v, V_DIM)
        if (x, d) in out_keys:
            fail("duplicate_access", "acesso de saída duplicado", [out_keys[(x, d)], v])
        out_keys[(x, d)] = v
        if x in out_indices:
            fail("duplicate_output_index", "índice repetido na saída", [out_indices[x], v])
        out_indices[x] = v

    # um argumento por (posição, saída) e cadeia consecutiva de dimensões
    patterns: Dict[int, Dict[int, frozenset]] = {}
    arg_shapes: Dict[int, Tuple[int, ...]] = {}
    for o in V_OUT:
        for p in V_POS:
            cell = blk.succs(o) & blk.succs(p) & V_IN
            targets = set().union(*(blk.succs(v) & V_ARG for v in cell)) if cell else set()
            if len(targets) != 1:
                fail("arg_per_slot", "cada (posição, saída) precisa de exatamente um argumento",
                     {o, p} | targets)
                continue
            dims = sorted(blk.inferred_dim(part(v, V_DIM)) for v in cell)
            if dims != list(range(1, len(cell) + 1)):
                fail("slot_dim_chain", "dimensões da posição não formam cadeia 1..k", {o, p} | cell)
                continue
            pattern = frozenset((part(v, V_INDEX), blk.inferred_dim(part(v, V_DIM))) for v in cell)
            patterns.setdefault(p, {})[o] = pattern
            shape = tuple(
                g.iota_length.get(length_of[x], -1)
                for x, _ in sorted(pattern, key=lambda item: item[1])
            )
            arg = next(iter(targets))
            if arg_shapes.setdefault(arg, shape) != shape:
                fail("shape_consistency", "argumento acessado com shapes diferentes", {arg} | cell)

    for p, by_output in patterns.items():
        if len(set(by_output.values())) > 1:
            fail("slot_index_pattern", "linhas com listas de índices diferentes na posição",
                 {p} | set(by_output))

    dims = sorted(blk.inferred_dim(part(v, V_DIM)) for v in V_OUTACC)
    if dims != list(range(1, len(V_OUTACC) + 1)):
        fail("output_dim_chain", "dimensões da saída não formam cadeia 1..k", V_OUTACC)


def ensure_compliant(g: InducedGraph) -> InducedGraph:
    violations = check_compliance(g)
    if violations:
        raise ComplianceError(violations)
    return g


# ============================================================================
# RECONSTRUÇÃO
# ============================================================================

def default_index_name(k: int) -> str:
    """k-ésima letra minúscula para k <= 26, ``idx<k>`` acima disso."""
    if k < 1:
        raise ValueError(f"k deve ser >= 1 (recebido {k})")
    return chr(ord("a") + k - 1) if k <= 26 else f"idx{k}"


def default_arg_name(k: int) -> str:
    """``A0``, ``A1``, ... para k = 1, 2, ..."""
    if k < 1:
        raise ValueError(f"k deve ser >= 1 (recebido {k})")
    return f"A{k - 1}"


@dataclass(frozen=True)
class Reconstruction:
    """Einsum reconstruído e as numerações inferidas (1-based) por vértice."""
    einsum: BatchedEinsum
    iota_index_inferred: Dict[int, int]
    iota_arg_inferred: Dict[int, int]
    iota_output_inferred: Dict[int, int]
    iota_arg_pos_inferred: Dict[int, int]


def _names(fn: Callable[[int], str], count: int, what: str) -> List[str]:
    names = [fn(k) for k in range(1, count + 1)]
    if len(set(names)) != len(names):
        raise NameCollisionError(f"função de nomes de {what} não é injetiva em 1..{count}")
    return names


def to_batched_einsum(
    g: InducedGraph,
    index_name: Callable[[int], str] = default_index_name,
    arg_name: Callable[[int], str] = default_arg_name,
) -> Reconstruction:
    """
    Reconstrói o einsum em lote codificado por ``g``.

    Numerações inferidas de posições, saídas, índices e argumentos seguem a
    ordem dos rótulos dos vértices; a dimensão de um vértice é
    ``1 + |preds ∩ V_dim|``.

    Raises:
        ComplianceError: ``g`` não é conforme
        NameCollisionError: ``index_name``/``arg_name`` não injetivas
    """
    ensure_compliant(g)
    blk = _Blocks(g)

    def ranked(color: NodeColor) -> Dict[int, int]:
        return {v: k + 1 for k, v in enumerate(sorted(blk[color]))}

    pos_num = ranked(NodeColor.ARG_POS)
    out_num = ranked(NodeColor.OUTPUT)
    index_num = ranked(NodeColor.INDEX)
    arg_num = ranked(NodeColor.ARG)
    index_names = _names(index_name, len(index_num), "índices")
    arg_names = _names(arg_name, len(arg_num), "argumentos")
    V_INDEX, V_DIM, V_ARG = blk[NodeColor.INDEX], blk[NodeColor.DIM], blk[NodeColor.ARG]
    V_IN, V_DTYPE, V_LENGTH = blk[NodeColor.ACCESS_IN], blk[NodeColor.DTYPE], blk[NodeColor.LENGTH]

    def symbol(v: int) -> str:
        return index_names[index_num[blk.only(blk.preds(v) & V_INDEX)] - 1]

    def dim(v: int) -> int:
        return blk.inferred_dim(blk.only(blk.preds(v) & V_DIM))

    i_out = tuple(symbol(v) for v in sorted(blk[NodeColor.ACCESS_OUT], key=dim))

    first_output = min(blk[NodeColor.OUTPUT])
    slots = sorted(blk[NodeColor.ARG_POS], key=pos_num.get)
    i_in = tuple(
        tuple(symbol(v) for v in sorted(blk.succs(first_output) & blk.succs(p) & V_IN, key=dim))
        for p in slots
    )

    length = {
        symbol_node: g.iota_length[blk.only(blk.preds(symbol_node) & V_LENGTH)]
        for symbol_node in V_INDEX
    }
    dtype = {a: g.iota_dtype[blk.only(blk.preds(a) & V_DTYPE)] for a in V_ARG}

    rows = []
    for o in sorted(blk[NodeColor.OUTPUT], key=out_num.get):
        row = []
        for p in slots:
            cell = sorted(blk.succs(o) & blk.succs(p) & V_IN, key=dim)
            a = blk.only(set().union(*(blk.succs(v) & V_ARG for v in cell)))
            shape = tuple(length[blk.only(blk.preds(v) & V_INDEX)] for v in cell)
            row.append(ArrayMeta(arg_names[arg_num[a] - 1], shape, dtype[a]))
        rows.append(tuple(row))

    e = BatchedEinsum(i_out=i_out, i_in=i_in, args=tuple(rows))
    return Reconstruction(
        einsum=e,
        iota_index_inferred=index_num,
        iota_arg_inferred=arg_num,
        iota_output_inferred=out_num,
        iota_arg_pos_inferred=pos_num,
    )


# ============================================================================
# EXPORTAÇÃO DOT
# ============================================================================

def to_dot(g: InducedGraph, name: str = "induced") -> str:
    """Texto DOT do grafo para inspeção visual (formato não estável)."""
    lines = [f"digraph {name} {{", "  node [style=filled];"]
    for v in range(g.n):
        color = int(g.colors[v])
        label = f"{v}:c{color}"
        for attr in ("iota_arg", "iota_index", "iota_dtype", "iota_length"):
            value = getattr(g, attr, {}).get(v)
            if value is not None:
                label += f"\\n{value.value if isinstance(value, DtypeCode) else value}"
        fill = DOT_COLORS.get(NodeColor(color), "white") if 1 <= color <= 9 else "white"
        lines.append(f'  n{v} [label="{label}", fillcolor="{fill}"];')
    for u, w in zip(*np.nonzero(g.adjacency)):
        lines.append(f"  n{u} -> n{w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
