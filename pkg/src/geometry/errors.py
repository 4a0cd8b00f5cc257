"""
Exceções do núcleo geométrico.

Erros de entrada derivam de ``ValueError`` e falhas numéricas de
``RuntimeError``; todas compartilham a base ``GeometryError`` para que a CLI
possa mapeá-las para códigos de saída.
"""

from typing import Any, Optional, Tuple


class GeometryError(Exception):
    """Base de todas as exceções do toolkit."""


class FormMismatchError(GeometryError, ValueError):
    """Vetores em bases ou dimensões diferentes."""


class DependentVectorsError(GeometryError, ValueError):
    """Vetores linearmente dependentes (posto abaixo da tolerância)."""


class NotInGroupError(GeometryError, ValueError):
    """Matriz não preserva a forma dentro da tolerância."""

    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"Matriz fora de O(2,n): resíduo {residual:.3e} > {tolerance:.1e}"
        )


class CartanFailureError(GeometryError, RuntimeError):
    """Decomposição de Cartan não reconstruiu o elemento."""


class AmbiguousPolesError(GeometryError, ValueError):
    """Gap λ − μ pequeno demais para definir polos."""

    def __init__(self, gap: float):
        self.gap = gap
        super().__init__(f"Polos ambíguos: gap {gap:.3e}")


class BranchRequiredError(GeometryError, ValueError):
    """Conversão conforme → universal exige o ramo k."""


class BoundaryPointError(GeometryError, ValueError):
    """Ponto no equador: pertence à fronteira conforme, não a AdS."""


class NotAcausalError(GeometryError, ValueError):
    """Conjunto de pontos não é acausal."""

    def __init__(self, message: str, worst_pair: Optional[Tuple[int, int]] = None):
        self.worst_pair = worst_pair
        super().__init__(message)


class WordBudgetExceededError(GeometryError, RuntimeError):
    """Enumeração de palavras ultrapassou o limite configurado."""

    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(f"Orçamento de palavras excedido: {count} > {budget}")


class EmptySampleError(GeometryError, ValueError):
    """Nenhuma palavra atingiu o gap mínimo; amostra vazia."""


class InconsistentLiftError(GeometryError, ValueError):
    """Não existe escolha de ramos que torne o levantamento acausal."""


class OracleDisagreementError(GeometryError, RuntimeError):
    """Teste por f± e teste do cone dual discordam fora da banda da malha."""

    def __init__(self, point: Any, slack: float):
        self.point = point
        self.slack = slack
        super().__init__(
            f"Oráculos discordam fora da banda (folga {slack:.3e})"
        )


class EmptyBoundaryError(GeometryError, ValueError):
    """Λ⁺∖Λ vazio: Λ é uma esfera amostrada completa."""


class DegenerateSampleError(GeometryError, RuntimeError):
    """Todas as razões amostradas ficaram indefinidas."""


class GeodesicMeetsLimitSetError(GeometryError, ValueError):
    """Geodésica passa a menos da folga de um ponto do conjunto limite."""


class PingPongFailureError(GeometryError, ValueError):
    """Discos de ping-pong se sobrepõem."""
