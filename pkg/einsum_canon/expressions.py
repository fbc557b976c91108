"""
einsum-canon - Expressões de Operandos
======================================
Árvore de expressões dos operandos funcionais (lambda sobre índices),
parser da sintaxe ``P[i,j]*P[i,j]``, impressão digital estrutural e
materialização vetorizada com numpy.

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import EvaluationError, NotationError, RaisingError


# ============================================================================
# NÓS
# ============================================================================

@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class ArrayAccess:
    """Acesso ``array[i, j, ...]``; os subscritos são parâmetros nus."""
    array: str
    indices: Tuple[str, ...]


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class UnaryCall:
    fn: str
    arg: "Expr"


@dataclass(frozen=True)
class Negate:
    arg: "Expr"


Expr = Union[Literal, Param, ArrayAccess, BinaryOp, UnaryCall, Negate]

UNARY_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "reciprocal": lambda x: 1.0 / x,
}

BINARY_OPERATORS = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.true_divide,
}

COMMUTATIVE = ("+", "*")

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _walk(node: Expr):
    yield node
    if isinstance(node, BinaryOp):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, (UnaryCall, Negate)):
        yield from _walk(node.arg)


# ============================================================================
# OPERANDO
# ============================================================================

@dataclass(frozen=True)
class OperandExpr:
    """
    Operando funcional ``lambda params. body``.

    Raises:
        RaisingError: parâmetro repetido ou referência a parâmetro não declarado
    """
    params: Tuple[str, ...]
    body: Expr

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise RaisingError(f"parâmetros repetidos: {self.params}")
        declared = set(self.params)
        for node in _walk(self.body):
            names = ()
            if isinstance(node, Param):
                names = (node.name,)
            elif isinstance(node, ArrayAccess):
                names = node.indices
            for name in names:
                if name not in declared:
                    raise RaisingError(f"parâmetro não declarado {name!r} em {render(self.body)}")

    @property
    def arity(self) -> int:
        return len(self.params)

    def arrays(self) -> Tuple[str, ...]:
        """Arrays externos referenciados, na ordem da primeira ocorrência."""
        seen: List[str] = []
        for node in _walk(self.body):
            if isinstance(node, ArrayAccess) and node.array not in seen:
                seen.append(node.array)
        return tuple(seen)

    def fingerprint(self) -> str:
        rename = {p: f"p{k}" for k, p in enumerate(self.params)}
        return f"lambda{self.arity}.{_fingerprint(self.body, rename)}"

    def is_plain_access(self) -> bool:
        """``lambda i1..in. P[i1, ..., in]`` com os eixos na ordem declarada."""
        return isinstance(self.body, ArrayAccess) and self.body.indices == self.params

    def to_text(self) -> str:
        return f"({','.join(self.params)}) := {render(self.body)}"

    @classmethod
    def identity(cls, array: str, arity: int) -> "OperandExpr":
        params = tuple(f"p{k}" for k in range(arity))
        return cls(params, ArrayAccess(array, params))


def _flatten(node: Expr, op: str) -> List[Expr]:
    if isinstance(node, BinaryOp) and node.op == op:
        return _flatten(node.left, op) + _flatten(node.right, op)
    return [node]


def _fingerprint(node: Expr, rename: Mapping[str, str]) -> str:
    if isinstance(node, Literal):
        return f"L{float(node.value)!r}"
    if isinstance(node, Param):
        return f"${rename[node.name]}"
    if isinstance(node, ArrayAccess):
        return f"{node.array}[{','.join(rename[i] for i in node.indices)}]"
    if isinstance(node, Negate):
        return f"neg({_fingerprint(node.arg, rename)})"
    if isinstance(node, UnaryCall):
        return f"{node.fn}({_fingerprint(node.arg, rename)})"
    if node.op in COMMUTATIVE:
        parts = sorted(_fingerprint(child, rename) for child in _flatten(node, node.op))
    else:
        parts = [_fingerprint(node.left, rename), _fingerprint(node.right, rename)]
    return f"{node.op}({','.join(parts)})"


def render(node: Expr, parent: int = 0) -> str:
    """Texto da expressão com o mínimo de parênteses."""
    if isinstance(node, Literal):
        value = float(node.value)
        return str(int(value)) if value.is_integer() else repr(value)
    if isinstance(node, Param):
        return node.name
    if isinstance(node, ArrayAccess):
        return f"{node.array}[{','.join(node.indices)}]"
    if isinstance(node, Negate):
        return f"-{render(node.arg, 3)}"
    if isinstance(node, UnaryCall):
        return f"{node.fn}({render(node.arg)})"
    prec = _PRECEDENCE[node.op]
    right_prec = prec + (0 if node.op in COMMUTATIVE else 1)
    text = f"{render(node.left, prec)}{node.op}{render(node.right, right_prec)}"
    return f"({text})" if prec < parent else text


# ============================================================================
# PARSER
# ============================================================================

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<symbol>\S))"
)


def tokenize(text: str, column: int = 1) -> List[Tuple[str, str, int]]:
    """Tokens ``(tipo, texto, coluna)`` de uma expressão."""
    tokens = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        match = _TOKEN.match(text, pos)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), column + match.start(kind)))
        pos = match.end()
    return tokens


class _ExprParser:
    """Descida recursiva: soma > produto > unário > primário."""

    def __init__(self, text: str, params: Sequence[str], line: Optional[int], column: int):
        self.tokens = tokenize(text, column)
        self.pos = 0
        self.params = set(params)
        self.line = line
        self.end_column = column + len(text)

    def peek(self) -> Tuple[str, str, int]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("end", "", self.end_column)

    def take(self) -> Tuple[str, str, int]:
        token = self.peek()
        self.pos += 1
        return token

    def expect(self, text: str) -> None:
        kind, value, column = self.take()
        if value != text or kind == "end":
            raise NotationError(f"esperado {text!r}, encontrado {value or 'fim'!r}", self.line, column)

    def parse(self) -> Expr:
        node = self.sum()
        kind, value, column = self.peek()
        if kind != "end":
            raise NotationError(f"token inesperado {value!r}", self.line, column)
        return node

    def sum(self) -> Expr:
        node = self.product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "symbol":
            op = self.take()[1]
            node = BinaryOp(op, node, self.product())
        return node

    def product(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "symbol":
            op = self.take()[1]
            node = BinaryOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek()[:2] == ("symbol", "-"):
            self.take()
            return Negate(self.unary())
        return self.primary()

    def primary(self) -> Expr:
        kind, value, column = self.take()
        if kind == "number":
            return Literal(float(value))
        if kind == "symbol" and value == "(":
            node = self.sum()
            self.expect(")")
            return node
        if kind != "name":
            raise NotationError(f"token inesperado {value or 'fim'!r}", self.line, column)
        following = self.peek()[1]
        if following == "[":
            self.take()
            return ArrayAccess(value, self.subscripts())
        if following == "(":
            if value not in UNARY_FUNCTIONS:
                raise NotationError(f"função desconhecida {value!r}", self.line, column)
            self.take()
            arg = self.sum()
            self.expect(")")
            return UnaryCall(value, arg)
        if value not in self.params:
            raise NotationError(f"nome desconhecido {value!r}", self.line, column)
        return Param(value)

    def subscripts(self) -> Tuple[str, ...]:
        names: List[str] = []
        if self.peek()[1] == "]":
            self.take()
            return ()
        while True:
            kind, value, column = self.take()
            if kind != "name" or value not in self.params:
                raise RaisingError(
                    f"subscrito {value!r} na linha {self.line} não é parâmetro "
                    f"(subscritos afins não são suportados)")
            names.append(value)
            kind, value, column = self.take()
            if value == "]":
                return tuple(names)
            if kind == "end":
                raise NotationError("esperado ',' ou ']', encontrado fim", self.line, column)
            if value != ",":
                raise RaisingError(
                    f"subscrito com {value!r} na linha {self.line} (subscritos afins não são suportados)")


def parse_expression(text: str, params: Sequence[str], line: Optional[int] = None, column: int = 1) -> Expr:
    """
    Lê o corpo de um operando.

    Raises:
        NotationError: erro de sintaxe (com linha/coluna quando conhecidas)
        RaisingError: subscrito que não é parâmetro
    """
    return _ExprParser(text, params, line, column).parse()


# ============================================================================
# MATERIALIZAÇÃO
# ============================================================================

def _evaluate(node: Expr, env: Dict[str, np.ndarray], bindings: Mapping[str, np.ndarray]):
    if isinstance(node, Literal):
        return np.float64(node.value)
    if isinstance(node, Param):
        return env[node.name]
    if isinstance(node, ArrayAccess):
        if node.array not in bindings:
            raise EvaluationError(f"array {node.array} sem binding")
        data = np.asarray(bindings[node.array])
        if data.ndim != len(node.indices):
            raise EvaluationError(
                f"{node.array} tem {data.ndim} eixo(s), acessado com {len(node.indices)}")
        try:
            return data[tuple(env[i] for i in node.indices)]
        except IndexError as exc:
            raise EvaluationError(f"acesso fora dos limites em {node.array}: {exc}") from None
    if isinstance(node, Negate):
        return np.negative(_evaluate(node.arg, env, bindings))
    if isinstance(node, UnaryCall):
        return UNARY_FUNCTIONS[node.fn](_evaluate(node.arg, env, bindings))
    return BINARY_OPERATORS[node.op](
        _evaluate(node.left, env, bindings), _evaluate(node.right, env, bindings))


def materialize(expr: OperandExpr, bindings: Mapping[str, np.ndarray], shape: Sequence[int]) -> np.ndarray:
    """
    Avalia ``expr`` em toda a grade de índices de ``shape``.

    Raises:
        RaisingError: aridade diferente da dimensão de ``shape``
        EvaluationError: array sem binding ou acesso fora dos limites
    """
    shape = tuple(int(d) for d in shape)
    if len(shape) != expr.arity:
        raise RaisingError(f"operando de aridade {expr.arity} materializado com shape {shape}")
    grids = np.indices(shape, sparse=True) if shape else ()
    env = dict(zip(expr.params, grids))
    value = np.asarray(_evaluate(expr.body, env, bindings))
    return np.array(np.broadcast_to(value, shape))
