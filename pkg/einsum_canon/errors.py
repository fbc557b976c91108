"""
einsum-canon - Exceções
=======================
Hierarquia de exceções compartilhada por todos os módulos do pacote.

A CLI traduz cada classe em um código de saída (ver ``cli.ExitStatus``).
"""

from typing import Any, List, Optional


class EinsumCanonError(Exception):
    """Erro base do pacote."""


class ValidationError(EinsumCanonError):
    """Einsum inválido; ``violations`` lista cada problema encontrado."""

    def __init__(self, violations: List[Any], message: Optional[str] = None):
        self.violations = list(violations)
        if message is None:
            message = "; ".join(str(v) for v in self.violations) or "einsum inválido"
        super().__init__(message)


class NotationError(EinsumCanonError):
    """Erro de sintaxe em documento texto, com linha/coluna (1-based)."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"linha {line}"
            if column is not None:
                location += f", coluna {column}"
            location += ": "
        super().__init__(f"{location}{message}")


class EncodingError(EinsumCanonError):
    """O einsum não pode ser codificado como grafo induzido."""


class ComplianceError(EinsumCanonError):
    """Grafo colorido que não decodifica para um einsum válido."""

    def __init__(self, violations: List[Any]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NameCollisionError(EinsumCanonError):
    """Funções de nomes não injetivas no intervalo necessário."""


class NotCanonicalError(EinsumCanonError):
    """Entrada de ``canonical_key`` não está em forma canônica."""


class EvaluationError(EinsumCanonError):
    """Binding ausente ou incompatível com os metadados declarados."""


class BudgetExceededError(EinsumCanonError):
    """Busca exaustiva maior que o orçamento configurado."""


class InfeasibleParamsError(EinsumCanonError):
    """Parâmetros do gerador aleatório fora das faixas documentadas."""


class RaisingError(EinsumCanonError):
    """Kernel não conforme ao formato de einsum funcional."""


class CanonicalMismatchError(EinsumCanonError):
    """Formas canônicas diferentes na identificação de um kernel."""

    def __init__(self, expected_key: str, found_key: str):
        self.expected_key = expected_key
        self.found_key = found_key
        self.diff = key_diff(expected_key, found_key)
        super().__init__("formas canônicas diferentes: " + ", ".join(self.diff))


class InvalidRecordError(EinsumCanonError):
    """Campos inválidos em um registro de desempenho."""


class NotFoundError(EinsumCanonError):
    """Nenhum registro para a chave/dispositivo consultados."""


class StorageError(EinsumCanonError):
    """Falha de E/S no banco de fatos."""


def key_diff(expected: str, found: str) -> List[str]:
    """Compara duas chaves canônicas campo a campo (separador ``|``)."""
    left = expected.split("|")
    right = found.split("|")
    diff = []
    for pos in range(max(len(left), len(right))):
        a = left[pos] if pos < len(left) else "<ausente>"
        b = right[pos] if pos < len(right) else "<ausente>"
        if a != b:
            diff.append(f"{a} != {b}")
    return diff
