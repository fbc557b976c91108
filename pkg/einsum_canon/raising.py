"""
einsum-canon - Raising de Kernels
=================================
Einsums funcionais em lote (operandos como expressões), o IR mínimo de
kernels, o raising de kernels para einsums em lote e a identificação de um
kernel contra um einsum de referência pelas formas canônicas.

Formato do kernel:
    domain: i0<96 i1<4
    def u(i,j) := P[i,j]*P[i,j]
    array: P float64 96x4
    stmt y1[i0] = sum([i1], u(i0,i1)*v(i1))

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
import re
import string
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .batched_einsum import ArrayMeta, BatchedEinsum, DtypeCode, ensure_valid, equals, evaluate
from .canonicalize import SubstitutionWitness, _inverse, canonicalize, compose_witness
from .errors import CanonicalMismatchError, NotationError, RaisingError, ValidationError
from .expressions import OperandExpr, materialize, parse_expression, render, tokenize
from .notation import format_key, parse_shape

logger = logging.getLogger("Raising")

PATTERNS = {
    "domain": re.compile(r"([A-Za-z_][A-Za-z0-9_]*)<([1-9][0-9]*)\Z"),
    "def": re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(([^)]*)\)\s*:=\s*(.+)\Z"),
    "stmt": re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\[([^\]]*)\]\s*=\s*(.+)\Z"),
    "name": re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z"),
}

# índices sintéticos começam em "i", como na notação usual de einsum
_SYNTHETIC_LETTERS = string.ascii_lowercase[8:] + string.ascii_lowercase[:8]


def synthetic_index_name(k: int) -> str:
    """k-ésimo índice sintético (1-based): i, j, k, ..., h, depois idx27..."""
    return _SYNTHETIC_LETTERS[k - 1] if k <= 26 else f"idx{k}"


# ============================================================================
# TIPOS
# ============================================================================

@dataclass(frozen=True)
class Factor:
    """Fator de um produto: operando identificado por ``name`` aplicado a ``indices``."""
    name: str
    expr: OperandExpr
    indices: Tuple[str, ...]


@dataclass(frozen=True)
class Statement:
    """``output[out_indices] = sum(reduction, prod(factors))``."""
    output: str
    out_indices: Tuple[str, ...]
    reduction: Tuple[str, ...]
    factors: Tuple[Factor, ...]

    def loop_indices(self) -> Tuple[str, ...]:
        seen: List[str] = []
        for f in self.factors:
            for x in f.indices:
                if x not in seen:
                    seen.append(x)
        for x in self.out_indices:
            if x not in seen:
                seen.append(x)
        return tuple(seen)


@dataclass
class FunctionalKernel:
    """Kernel: domínio retangular, regras ``def``, arrays externos e comandos."""
    domain: Dict[str, int] = field(default_factory=dict)
    statements: List[Statement] = field(default_factory=list)
    arrays: Dict[str, ArrayMeta] = field(default_factory=dict)
    rules: Dict[str, OperandExpr] = field(default_factory=dict)

    def output_meta(self, s: Statement) -> ArrayMeta:
        dtypes = [_operand_dtype(f.expr, self.arrays) for f in s.factors]
        return ArrayMeta(s.output, tuple(self.domain[x] for x in s.out_indices),
                         DtypeCode.widest(dtypes))

    @property
    def decls(self) -> Dict[str, ArrayMeta]:
        """Arrays de entrada e de saída."""
        decls = dict(self.arrays)
        for s in self.statements:
            decls[s.output] = self.output_meta(s)
        return decls


@dataclass(frozen=True)
class FunctionalBatchedEinsum:
    """
    Einsum em lote cujos argumentos são operandos funcionais.

    ``operand_map`` leva nomes do esqueleto a expressões; nomes ausentes valem
    o acesso direto ao array de mesmo nome. ``arrays`` declara os arrays
    externos quando conhecidos (usado na verificação de dtype).
    """
    skeleton: BatchedEinsum
    operand_map: Dict[str, OperandExpr] = field(default_factory=dict)
    arrays: Dict[str, ArrayMeta] = field(default_factory=dict)

    def __post_init__(self):
        metas = {a.name: a for a in self.skeleton.universe}
        for name, expr in self.operand_map.items():
            if name not in metas:
                raise RaisingError(f"operando {name} não aparece no esqueleto")
            if expr.arity != metas[name].dim:
                raise RaisingError(
                    f"operando {name} tem aridade {expr.arity}, esperado {metas[name].dim}")
            referenced = expr.arrays()
            if referenced and all(a in self.arrays for a in referenced):
                dtype = _operand_dtype(expr, self.arrays)
                if dtype != metas[name].dtype:
                    raise RaisingError(
                        f"operando {name} produz {dtype.value}, declarado {metas[name].dtype.value}")

    def operand(self, name: str) -> OperandExpr:
        if name in self.operand_map:
            return self.operand_map[name]
        meta = next(a for a in self.skeleton.universe if a.name == name)
        return OperandExpr.identity(name, meta.dim)


@dataclass(frozen=True)
class RaisedKernel:
    """Resultado do raising: einsum funcional e mapas sintético -> kernel."""
    functional: FunctionalBatchedEinsum
    sigma_arg: Dict[str, str]
    sigma_idx: Dict[str, str]
    outputs: Tuple[str, ...]

    @property
    def skeleton(self) -> BatchedEinsum:
        return self.functional.skeleton


@dataclass(frozen=True)
class Identification:
    """
    Kernel identificado como instância de um einsum de referência.

    ``sigma_arg``/``sigma_idx`` levam símbolos da referência aos do kernel;
    ``witness`` é ``W(ref, esqueleto)`` e alinha as linhas da referência aos
    comandos do kernel.
    """
    sigma_arg: Dict[str, str]
    sigma_idx: Dict[str, str]
    witness: SubstitutionWitness
    raised: RaisedKernel

    def operand_for(self, ref_arg: str) -> OperandExpr:
        synthetic = _inverse(self.witness.sigma_arg)[ref_arg]
        return self.raised.functional.operand(synthetic)

    def statement_for(self, ref_row: int) -> str:
        """Saída do comando que corresponde à linha ``ref_row`` (1-based)."""
        return self.raised.outputs[self.witness.sigma_i[ref_row] - 1]

    def reference_bindings(self, ref: BatchedEinsum, bindings: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
        """Bindings da referência materializando os operandos do kernel."""
        return {
            a.name: materialize(self.operand_for(a.name), bindings, a.shape).astype(
                a.dtype.numpy_dtype, copy=False)
            for a in ref.universe
        }

    def to_lines(self) -> List[str]:
        lines = [f"row: {i} -> {self.statement_for(i)}" for i in sorted(self.witness.sigma_i)]
        lines += [f"idx: {k} -> {v}" for k, v in sorted(self.sigma_idx.items())]
        lines += [
            f"arg: {k} -> {v} = {render(self.operand_for(k).body)}"
            for k, v in sorted(self.sigma_arg.items())
        ]
        return lines


def _operand_dtype(expr: OperandExpr, arrays: Mapping[str, ArrayMeta]) -> DtypeCode:
    referenced = expr.arrays()
    missing = [a for a in referenced if a not in arrays]
    if missing:
        raise RaisingError(f"array(s) não declarado(s): {', '.join(missing)}")
    if not referenced:
        return DtypeCode.FLOAT64
    return DtypeCode.widest([arrays[a].dtype for a in referenced])


# ============================================================================
# PARSER DO KERNEL
# ============================================================================

def _names(text: str, line: int, what: str) -> Tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    names = tuple(part.strip() for part in text.split(","))
    for name in names:
        if not PATTERNS["name"].match(name):
            raise NotationError(f"{what} inválido {name!r}", line)
    return names


def _parse_rhs(text: str, line: int, column: int) -> Tuple[Optional[Tuple[str, ...]], List[Tuple[str, str, Tuple[str, ...]]]]:
    """``sum([r...], f(..)*g[..])`` ou produto nu -> (redução, fatores brutos)."""
    tokens = tokenize(text, column)
    pos = 0

    def take(expected: Optional[str] = None) -> Tuple[str, str, int]:
        nonlocal pos
        if pos >= len(tokens):
            raise NotationError(f"comando incompleto, esperado {expected or 'token'!r}", line)
        token = tokens[pos]
        pos += 1
        if expected is not None and token[1] != expected:
            raise RaisingError(
                f"comando fora da forma soma-de-um-produto na linha {line}: "
                f"esperado {expected!r}, encontrado {token[1]!r}")
        return token

    def name_list(close: str) -> Tuple[str, ...]:
        names: List[str] = []
        if pos < len(tokens) and tokens[pos][1] == close:
            take(close)
            return ()
        while True:
            kind, value, col = take()
            if kind != "name":
                raise RaisingError(f"subscrito {value!r} na linha {line} não é um índice do laço")
            names.append(value)
            _, sep, col = take()
            if sep == close:
                return tuple(names)
            if sep != ",":
                raise NotationError(f"esperado ',' ou {close!r}", line, col)

    reduction = None
    closing = 0
    if len(tokens) > 1 and tokens[0][1] == "sum" and tokens[1][1] == "(":
        take("sum")
        take("(")
        take("[")
        reduction = name_list("]")
        take(",")
        closing = 1

    factors = []
    while True:
        kind, name, col = take()
        if kind != "name":
            raise RaisingError(f"fator inválido {name!r} na linha {line}")
        _, bracket, col = take()
        if bracket == "(":
            factors.append(("rule", name, name_list(")")))
        elif bracket == "[":
            factors.append(("array", name, name_list("]")))
        else:
            raise RaisingError(f"fator {name} sem argumentos na linha {line}")
        if pos < len(tokens) and tokens[pos][1] == "*":
            take("*")
            continue
        break
    for _ in range(closing):
        take(")")
    if pos != len(tokens):
        raise RaisingError(
            f"comando fora da forma soma-de-um-produto na linha {line}: sobra {tokens[pos][1]!r}")
    return reduction, factors


def parse_kernel(text: str) -> FunctionalKernel:
    """
    Lê o formato texto de kernels.

    Raises:
        NotationError: linha malformada (com número da linha)
        RaisingError: comando fora da forma ``sum(redução, produto)``
    """
    kernel = FunctionalKernel()
    raw_statements = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if content.startswith("def "):
            match = PATTERNS["def"].match(content[4:].strip())
            if not match:
                raise NotationError("esperado 'def nome(params) := expr'", line_no)
            name, params_text, body_text = match.groups()
            if name in kernel.rules:
                raise NotationError(f"regra {name} definida mais de uma vez", line_no)
            params = _names(params_text, line_no, "parâmetro")
            column = raw.index(body_text) + 1
            kernel.rules[name] = OperandExpr(params, parse_expression(body_text, params, line_no, column))
        elif content.startswith("stmt "):
            match = PATTERNS["stmt"].match(content[5:].strip())
            if not match:
                raise NotationError("esperado 'stmt saida[...] = sum([...], produto)'", line_no)
            raw_statements.append((line_no, match.groups(), raw.index(match.group(3)) + 1))
        elif content.startswith("domain:"):
            for item in content[len("domain:"):].split():
                match = PATTERNS["domain"].match(item)
                if not match:
                    raise NotationError(f"domínio inválido {item!r} (esperado nome<extensão)", line_no)
                kernel.domain[match.group(1)] = int(match.group(2))
        elif content.startswith("array:"):
            parts = content[len("array:"):].split()
            if len(parts) != 3:
                raise NotationError("esperado 'array: <nome> <dtype> <d1>x<d2>...'", line_no)
            name, dtype_name, shape_text = parts
            if name in kernel.arrays:
                raise NotationError(f"array {name} declarado mais de uma vez", line_no)
            try:
                dtype = DtypeCode(dtype_name)
            except ValueError:
                raise NotationError(f"dtype desconhecido {dtype_name!r}", line_no) from None
            kernel.arrays[name] = ArrayMeta(name, parse_shape(shape_text, line_no, 1), dtype)
        else:
            raise NotationError(f"linha não reconhecida: {content!r}", line_no)

    clash = set(kernel.rules) & set(kernel.arrays)
    if clash:
        raise NotationError(f"nomes usados como regra e array: {', '.join(sorted(clash))}")
    for line_no, (output, out_text, rhs), column in raw_statements:
        kernel.statements.append(_build_statement(kernel, line_no, output, out_text, rhs, column))
    if not kernel.statements:
        raise NotationError("kernel sem comandos 'stmt'")
    return kernel


def _build_statement(kernel: FunctionalKernel, line: int, output: str, out_text: str,
                     rhs: str, column: int) -> Statement:
    out_indices = _names(out_text, line, "índice")
    reduction, raw_factors = _parse_rhs(rhs, line, column)
    factors = []
    for kind, name, args in raw_factors:
        if kind == "rule":
            if name not in kernel.rules:
                raise NotationError(f"regra desconhecida {name!r}", line)
            expr = kernel.rules[name]
            if expr.arity != len(args):
                raise RaisingError(f"{name} tem aridade {expr.arity}, chamado com {len(args)} índice(s)")
        else:
            expr = OperandExpr.identity(name, len(args))
        factors.append(Factor(name, expr, args))

    used = {x for f in factors for x in f.indices}
    for x in used | set(out_indices) | set(reduction or ()):
        if x not in kernel.domain:
            raise RaisingError(f"índice {x} sem limite no domínio (linha {line})")
    if len(set(out_indices)) != len(out_indices):
        raise RaisingError(f"índices de saída repetidos na linha {line}")
    if not set(out_indices) <= used:
        raise RaisingError(f"índice de saída ausente dos fatores na linha {line}")
    implied = used - set(out_indices)
    if reduction is None:
        reduction = tuple(sorted(implied))
    if set(reduction) != implied or len(set(reduction)) != len(reduction):
        raise RaisingError(
            f"redução {list(reduction)} não corresponde aos índices somados {sorted(implied)} (linha {line})")
    return Statement(output, out_indices, tuple(reduction), tuple(factors))


# ============================================================================
# RAISING
# ============================================================================

def raise_to_batched_einsum(k: FunctionalKernel) -> RaisedKernel:
    """
    Reinterpreta os comandos de ``k`` como um einsum funcional em lote.

    Cada comando vira uma linha; dois fatores recebem o mesmo argumento
    sintético quando suas expressões têm a mesma impressão digital (e o mesmo
    shape e dtype).

    Raises:
        RaisingError: padrões de índices diferentes entre comandos, número de
            fatores diferente, array não declarado
    """
    if not k.statements:
        raise RaisingError("kernel sem comandos")
    first = k.statements[0]
    n = len(first.factors)
    pattern = None
    for s in k.statements:
        if len(s.factors) != n:
            raise RaisingError(f"{s.output} tem {len(s.factors)} fatores, esperado {n}")
        position = {x: p for p, x in enumerate(s.loop_indices())}
        this = (
            tuple(tuple(position[x] for x in f.indices) for f in s.factors),
            tuple(position[x] for x in s.out_indices),
        )
        if pattern is None:
            pattern = this
        elif this != pattern:
            raise RaisingError(f"padrão de índices de {s.output} difere de {first.output}")

    loop = first.loop_indices()
    synthetic = [synthetic_index_name(p + 1) for p in range(len(loop))]
    sigma_idx = dict(zip(synthetic, loop))
    slot_patterns, out_pattern = pattern

    names: Dict[Tuple, str] = {}
    sigma_arg: Dict[str, str] = {}
    operand_map: Dict[str, OperandExpr] = {}
    taken: Dict[str, int] = {}
    rows = []
    for s in k.statements:
        row = []
        for f in s.factors:
            shape = tuple(k.domain[x] for x in f.indices)
            dtype = _operand_dtype(f.expr, k.arrays)
            key = (f.expr.fingerprint(), shape, dtype)
            if key not in names:
                count = taken.get(f.name, 0)
                taken[f.name] = count + 1
                name = f.name if count == 0 else f"{f.name}_{count}"
                names[key] = name
                sigma_arg[name] = f.name
                operand_map[name] = f.expr
            row.append(ArrayMeta(names[key], shape, dtype))
        rows.append(tuple(row))

    try:
        skeleton = ensure_valid(BatchedEinsum(
            i_out=tuple(synthetic[p] for p in out_pattern),
            i_in=tuple(tuple(synthetic[p] for p in slot) for slot in slot_patterns),
            args=tuple(rows),
        ))
    except ValidationError as exc:
        raise RaisingError(f"esqueleto inválido: {exc}") from None
    logger.info(f"[RAISING] {len(k.statements)} comando(s) -> {skeleton.subscripts} "
                f"com {len(skeleton.universe)} operando(s)")
    functional = FunctionalBatchedEinsum(skeleton, operand_map, dict(k.arrays))
    return RaisedKernel(functional, sigma_arg, sigma_idx, tuple(s.output for s in k.statements))


def identify_as_einsum(k: FunctionalKernel, ref: BatchedEinsum) -> Identification:
    """
    Identifica ``k`` como instância de ``ref``.

    Faz o raising, canonicaliza os dois lados e compara as formas canônicas;
    os mapas resultantes compõem canônico -> referência (invertido),
    canônico -> sintético e sintético -> kernel.

    Raises:
        CanonicalMismatchError: formas canônicas diferentes (com diff das chaves)
    """
    ensure_valid(ref)
    raised = raise_to_batched_einsum(k)
    c_raised = canonicalize(raised.skeleton)
    c_ref = canonicalize(ref)
    if not equals(c_raised.canonical, c_ref.canonical):
        raise CanonicalMismatchError(format_key(c_ref.canonical), format_key(c_raised.canonical))

    ref_to_canon_arg = _inverse(c_ref.sigma_arg)
    ref_to_canon_idx = _inverse(c_ref.sigma_idx)
    sigma_arg = {
        a: raised.sigma_arg[c_raised.sigma_arg[ref_to_canon_arg[a]]] for a in ref.arg_names
    }
    sigma_idx = {
        x: raised.sigma_idx[c_raised.sigma_idx[ref_to_canon_idx[x]]] for x in ref.all_indices
    }
    logger.info(f"[RAISING] kernel identificado como {ref.subscripts}")
    return Identification(sigma_arg, sigma_idx, compose_witness(c_ref, c_raised), raised)


def is_idealized(f: FunctionalBatchedEinsum) -> bool:
    """
    True se todo operando é ``lambda i1..in. P[i1..in]`` sobre arrays ``P``
    distintos entre si e com o shape/dtype declarados.
    """
    sources: Dict[str, str] = {}
    for a in f.skeleton.universe:
        expr = f.operand(a.name)
        if not expr.is_plain_access() or expr.arity != a.dim:
            return False
        source = expr.body.array
        if source in sources.values():
            return False
        sources[a.name] = source
        meta = f.arrays.get(source)
        if meta is not None and (meta.shape != a.shape or meta.dtype != a.dtype):
            return False
    return True


def lower_to_kernel(e: BatchedEinsum) -> FunctionalKernel:
    """Kernel trivial de ``e``: um comando por linha, fatores com acesso direto."""
    ensure_valid(e)
    arrays = {a.name: a for a in e.universe}
    statements = []
    for i, row in enumerate(e.args, start=1):
        output = f"y{i}"
        while output in arrays:
            output = f"_{output}"
        factors = tuple(
            Factor(a.name, OperandExpr.identity(a.name, a.dim), e.i_in[j])
            for j, a in enumerate(row)
        )
        statements.append(Statement(output, e.i_out, e.reduction_indices, factors))
    return FunctionalKernel(domain=dict(e.index_to_length), statements=statements, arrays=arrays)


# ============================================================================
# AVALIAÇÃO
# ============================================================================

def evaluate_functional(f: FunctionalBatchedEinsum, bindings: Mapping[str, np.ndarray]) -> List[np.ndarray]:
    """
    Avalia o einsum funcional: materializa cada operando sobre o seu shape e
    avalia o esqueleto.

    Raises:
        EvaluationError: array sem binding ou fora dos limites
    """
    materialized = {
        a.name: materialize(f.operand(a.name), bindings, a.shape).astype(a.dtype.numpy_dtype, copy=False)
        for a in f.skeleton.universe
    }
    return evaluate(f.skeleton, materialized)


def evaluate_kernel(k: FunctionalKernel, bindings: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """Avalia os comandos de ``k`` diretamente, sem raising."""
    results = {}
    for s in k.statements:
        letters = {x: string.ascii_letters[p] for p, x in enumerate(s.loop_indices())}
        operands = [
            materialize(f.expr, bindings, [k.domain[x] for x in f.indices]) for f in s.factors
        ]
        subscripts = ",".join("".join(letters[x] for x in f.indices) for f in s.factors)
        subscripts += "->" + "".join(letters[x] for x in s.out_indices)
        results[s.output] = np.einsum(subscripts, *operands, optimize=False)
    return results
