"""
einsum-canon - Notação
======================
Leitura e escrita de einsums em lote no formato texto ``SpecDocument`` e a
chave canônica (``FE1|...``) usada pelo banco de fatos.

Formato do documento:
    einsum: ij,j->i
    row: A,B
    row: A,C
    array: A float64 96x4
    array: B float64 4
    array: C float64 4

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .batched_einsum import ArrayMeta, BatchedEinsum, DtypeCode, ensure_valid, equals
from .errors import NotationError, NotCanonicalError

logger = logging.getLogger("Notation")

KEY_PREFIX = "FE1"

PATTERNS = {
    "name": re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z"),
    "letter": re.compile(r"[a-z]\Z"),
    "extent": re.compile(r"[1-9][0-9]*\Z"),
    "key_index": re.compile(r"idx[0-9]+|[a-z]"),
}


@dataclass
class SpecDocument:
    """Documento texto de um einsum em lote, antes da validação."""
    notation: str
    batch: List[List[str]] = field(default_factory=list)
    arrays: Dict[str, ArrayMeta] = field(default_factory=dict)

    def to_batched_einsum(self) -> BatchedEinsum:
        """Monta e valida o ``BatchedEinsum`` do documento."""
        i_in, i_out = parse_subscripts(self.notation)
        rows = []
        for r, names in enumerate(self.batch, start=1):
            if len(names) != len(i_in):
                raise NotationError(f"linha de lote {r} tem {len(names)} arrays, esperado {len(i_in)}")
            row = []
            for name in names:
                if name not in self.arrays:
                    raise NotationError(f"array desconhecido: {name}")
                row.append(self.arrays[name])
            rows.append(tuple(row))
        used = {name for names in self.batch for name in names}
        for name in self.arrays:
            if name not in used:
                logger.warning(f"[NOTATION] array {name} declarado e não usado")
        return ensure_valid(BatchedEinsum(i_out=i_out, i_in=i_in, args=tuple(rows)))

    def to_dict(self) -> Dict:
        return {
            "notation": self.notation,
            "batch": [list(r) for r in self.batch],
            "arrays": {name: meta.to_dict() for name, meta in self.arrays.items()},
        }


def parse_subscripts(notation: str, line: int = 1, column: int = 1) -> Tuple[Tuple[Tuple[str, ...], ...], Tuple[str, ...]]:
    """
    ``"ij,j->i"`` -> (listas de entrada, lista de saída); índices de uma letra a-z.
    """
    if "->" not in notation:
        raise NotationError("notação sem '->' (modo implícito não suportado)", line, column)
    lhs, rhs = notation.split("->", 1)
    if "->" in rhs:
        raise NotationError("mais de um '->' na notação", line, column + len(lhs) + 2 + rhs.index("->"))

    def letters(text: str, start: int) -> Tuple[str, ...]:
        for k, ch in enumerate(text):
            if not PATTERNS["letter"].match(ch):
                raise NotationError(f"índice inválido {ch!r} (apenas a-z)", line, start + k)
        return tuple(text)

    i_in = []
    col = column
    for part in lhs.split(","):
        i_in.append(letters(part, col))
        col += len(part) + 1
    i_out = letters(rhs, column + len(lhs) + 2)
    return tuple(i_in), i_out


def batched_einsum(subscripts: str, rows: Sequence[Sequence[ArrayMeta]]) -> BatchedEinsum:
    """
    Constrói um einsum em lote a partir da notação clássica.

    Example:
        >>> A = array("A", (96, 4)); B, C = array("B", (4,)), array("C", (4,))
        >>> batched_einsum("ij,j->i", [[A, B], [A, C]])
    """
    i_in, i_out = parse_subscripts(subscripts.replace(" ", ""))
    return ensure_valid(BatchedEinsum(i_out=i_out, i_in=i_in, args=tuple(tuple(r) for r in rows)))


# ============================================================================
# DOCUMENTO TEXTO
# ============================================================================

def parse_shape(text: str, line: int, column: int) -> Tuple[int, ...]:
    if text == "scalar":
        return ()
    shape = []
    offset = 0
    for part in text.split("x"):
        if not PATTERNS["extent"].match(part):
            raise NotationError(f"extensão inválida {part!r}", line, column + offset)
        shape.append(int(part))
        offset += len(part) + 1
    return tuple(shape)


def parse_spec_document(text: str) -> SpecDocument:
    """Lê o formato texto sem validar o einsum resultante."""
    doc = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        indent = len(content) - len(content.lstrip())
        content = content.strip()
        keyword, sep, rest = content.partition(":")
        if not sep:
            raise NotationError(f"linha sem palavra-chave: {content!r}", line_no, indent + 1)
        value_col = indent + len(keyword) + 2 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()

        if keyword == "einsum":
            if doc is not None:
                raise NotationError("mais de uma linha 'einsum:'", line_no, indent + 1)
            parse_subscripts(rest, line_no, value_col)
            doc = SpecDocument(notation=rest)
            continue
        if doc is None:
            raise NotationError("a primeira linha deve ser 'einsum: <notação>'", line_no, indent + 1)

        if keyword == "row":
            names = [n.strip() for n in rest.split(",")]
            for name in names:
                if not PATTERNS["name"].match(name):
                    raise NotationError(f"nome de array inválido {name!r}", line_no, value_col)
            doc.batch.append(names)
        elif keyword == "array":
            parts = rest.split()
            if len(parts) != 3:
                raise NotationError("esperado 'array: <nome> <dtype> <d1>x<d2>...'", line_no, value_col)
            name, dtype_name, shape_text = parts
            if not PATTERNS["name"].match(name):
                raise NotationError(f"nome de array inválido {name!r}", line_no, value_col)
            if name in doc.arrays:
                raise NotationError(f"array {name} definido mais de uma vez", line_no, value_col)
            try:
                dtype = DtypeCode(dtype_name)
            except ValueError:
                raise NotationError(f"dtype desconhecido {dtype_name!r}", line_no,
                                    value_col + len(name) + 1) from None
            shape_col = value_col + rest.index(shape_text, len(name) + len(dtype_name))
            doc.arrays[name] = ArrayMeta(name, parse_shape(shape_text, line_no, shape_col), dtype)
        else:
            raise NotationError(f"palavra-chave desconhecida {keyword!r}", line_no, indent + 1)

    if doc is None:
        raise NotationError("documento vazio")
    if not doc.batch:
        raise NotationError("documento sem linhas 'row:'")
    return doc


def parse_classic(text: str) -> BatchedEinsum:
    """Lê um ``SpecDocument`` e devolve o einsum validado."""
    return parse_spec_document(text).to_batched_einsum()


def _shape_text(shape: Tuple[int, ...]) -> str:
    return "x".join(str(d) for d in shape) if shape else "scalar"


def print_classic(e: BatchedEinsum) -> str:
    """
    Escreve ``e`` no formato ``SpecDocument``.

    Raises:
        NotationError: índice fora da gramática de uma letra (ex.: ``idx27``)
    """
    for x in e.all_indices:
        if not PATTERNS["letter"].match(x):
            raise NotationError(f"índice {x!r} fora da gramática a-z")
    lines = [f"einsum: {e.subscripts}"]
    lines += [f"row: {','.join(a.name for a in row)}" for row in e.args]
    lines += [f"array: {a.name} {a.dtype.value} {_shape_text(a.shape)}" for a in e.universe]
    return "\n".join(lines) + "\n"


# ============================================================================
# CHAVE CANÔNICA
# ============================================================================

def format_key(e: BatchedEinsum) -> str:
    """Serializa ``e`` na gramática da chave, sem verificar canonicidade."""
    arrays = sorted(e.universe, key=lambda a: a.name)
    fields = [
        KEY_PREFIX,
        f"b={e.b}",
        f"n={e.n}",
        f"out={''.join(e.i_out)}",
        f"in={';'.join(''.join(idx) for idx in e.i_in)}",
        f"rows={';'.join(','.join(a.name for a in row) for row in e.args)}",
    ]
    fields += [f"{a.name}={a.dtype.value}:{_shape_text(a.shape)}" for a in arrays]
    return "|".join(fields)


def canonical_key(e: BatchedEinsum, check: bool = True) -> str:
    """
    Chave canônica de ``e`` (deve estar em forma canônica).

    Args:
        e: einsum canônico
        check: re-canonicaliza e compara; desligar apenas quando ``e`` acabou
            de sair de ``canonicalize``

    Raises:
        NotCanonicalError: ``e`` não é a própria forma canônica
    """
    if check:
        from .canonicalize import canonicalize

        if not equals(canonicalize(e).canonical, e):
            raise NotCanonicalError(f"{e.subscripts} não está em forma canônica")
    return format_key(e)


def _tokenize_indices(text: str) -> Tuple[str, ...]:
    tokens = PATTERNS["key_index"].findall(text)
    if "".join(tokens) != text:
        raise NotationError(f"lista de índices inválida na chave: {text!r}")
    return tuple(tokens)


def parse_canonical_key(key: str) -> BatchedEinsum:
    """Inverso de ``format_key``."""
    fields = key.split("|")
    if len(fields) < 6 or fields[0] != KEY_PREFIX:
        raise NotationError(f"chave sem prefixo {KEY_PREFIX} ou incompleta")
    values: Dict[str, str] = {}
    for item in fields[1:6]:
        name, sep, value = item.partition("=")
        if not sep:
            raise NotationError(f"campo inválido na chave: {item!r}")
        values[name] = value
    try:
        b, n = int(values["b"]), int(values["n"])
        i_out = _tokenize_indices(values["out"])
        i_in = tuple(_tokenize_indices(part) for part in values["in"].split(";"))
        row_names = [r.split(",") for r in values["rows"].split(";")]
    except (KeyError, ValueError) as exc:
        raise NotationError(f"chave malformada: {exc}") from None

    arrays: Dict[str, ArrayMeta] = {}
    for item in fields[6:]:
        name, _, spec = item.partition("=")
        dtype_name, _, shape_text = spec.partition(":")
        try:
            arrays[name] = ArrayMeta(name, parse_shape(shape_text, 1, 1), DtypeCode(dtype_name))
        except ValueError:
            raise NotationError(f"metadados inválidos na chave: {item!r}") from None
    if len(i_in) != n or len(row_names) != b:
        raise NotationError("b/n da chave não correspondem às listas")
    try:
        rows = tuple(tuple(arrays[name] for name in names) for names in row_names)
    except KeyError as exc:
        raise NotationError(f"array {exc} sem metadados na chave") from None
    return ensure_valid(BatchedEinsum(i_out=i_out, i_in=i_in, args=rows))
