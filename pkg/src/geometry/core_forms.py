"""
Aritmética de ℝ^{2,n}: forma bilinear nas bases diagonal e split,
assinaturas de restrições e mudança de base.

Convenções:
    Diagonal: q(u, v, x₁..xₙ) = −u² − v² + Σ xᵢ²
    Split:    q(y) = y₁y_{N} + y₂y_{N−1} + y₃² + … + y_{N−2}²   (N = n + 2)

A polarização ⟨u,v⟩ = (q(u+v) − q(u) − q(v))/2 fixa as entradas 1/2 fora
da diagonal da matriz de Gram split.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from ..config.settings import settings
from .errors import DependentVectorsError, FormMismatchError


class FormBasis(Enum):
    """Base em que as coordenadas de ℝ^{2,n} estão escritas."""
    DIAGONAL = "diagonal"
    SPLIT = "split"


@dataclass(frozen=True)
class AmbientDims:
    """Dimensão espacial n; a dimensão ambiente é n + 2."""
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n deve ser >= 2 (recebido {self.n})")

    @property
    def ambient(self) -> int:
        return self.n + 2


@dataclass(frozen=True)
class AmbientVector:
    """Vetor de ℝ^{2,n} com a base em que está escrito."""
    coords: np.ndarray
    basis: FormBasis = FormBasis.DIAGONAL

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float).reshape(-1)
        if not np.all(np.isfinite(coords)):
            raise ValueError("Coordenadas não finitas")
        coords.setflags(write=False)
        object.__setattr__(self, 'coords', coords)

    @property
    def dim(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class Signature:
    """Assinatura (negativos, positivos, nulos) de uma forma restrita."""
    neg: int
    pos: int
    zero: int

    def as_tuple(self) -> tuple:
        return (self.neg, self.pos, self.zero)


@lru_cache(maxsize=64)
def _gram_cached(basis: FormBasis, dim: int) -> np.ndarray:
    if dim < 4:
        raise FormMismatchError(f"Dimensão ambiente {dim} < 4")
    if basis is FormBasis.DIAGONAL:
        gram = np.eye(dim)
        gram[0, 0] = gram[1, 1] = -1.0
    else:
        gram = np.zeros((dim, dim))
        for i, j in ((0, dim - 1), (1, dim - 2)):
            gram[i, j] = gram[j, i] = 0.5
        for k in range(2, dim - 2):
            gram[k, k] = 1.0
    gram.setflags(write=False)
    return gram


def gram_matrix(basis: FormBasis, dim: int) -> np.ndarray:
    """
    Matriz de Gram J da forma na base pedida.

    Args:
        basis: Base das coordenadas
        dim: Dimensão ambiente (n + 2)

    Returns:
        Matriz simétrica dim × dim (somente leitura)
    """
    return _gram_cached(basis, int(dim))


@lru_cache(maxsize=64)
def _transfer_cached(dim: int) -> tuple:
    last = dim - 1
    t = np.zeros((dim, dim))
    t[0, 0], t[0, 2] = 1.0, 1.0
    t[last, 0], t[last, 2] = -1.0, 1.0
    t[1, 1], t[1, 3] = 1.0, 1.0
    t[last - 1, 1], t[last - 1, 3] = -1.0, 1.0
    for j in range(2, dim - 2):
        t[j, j + 2] = 1.0

    t_inv = np.zeros((dim, dim))
    t_inv[0, 0], t_inv[0, last] = 0.5, -0.5
    t_inv[2, 0], t_inv[2, last] = 0.5, 0.5
    t_inv[1, 1], t_inv[1, last - 1] = 0.5, -0.5
    t_inv[3, 1], t_inv[3, last - 1] = 0.5, 0.5
    for j in range(2, dim - 2):
        t_inv[j + 2, j] = 1.0

    t.setflags(write=False)
    t_inv.setflags(write=False)
    return t, t_inv


def transfer_matrix(dim: int, to: FormBasis) -> np.ndarray:
    """
    Matriz T com Tᵀ J_split T = J_diag (to=SPLIT) ou sua inversa (to=DIAGONAL).
    """
    t, t_inv = _transfer_cached(int(dim))
    return t if to is FormBasis.SPLIT else t_inv


def form_inner(a: np.ndarray, b: np.ndarray, basis: FormBasis = FormBasis.DIAGONAL) -> np.ndarray:
    """
    ⟨a, b⟩ em lote: a e b com shape (..., N), broadcast nas dimensões iniciais.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if basis is FormBasis.DIAGONAL:
        prod = a * b
        return prod[..., 2:].sum(axis=-1) - prod[..., 0] - prod[..., 1]
    gram = gram_matrix(basis, a.shape[-1])
    return np.einsum('...i,ij,...j->...', a, gram, b)


def _check_pair(u: AmbientVector, v: AmbientVector) -> None:
    if u.basis is not v.basis:
        raise FormMismatchError(f"Bases diferentes: {u.basis.value} e {v.basis.value}")
    if u.dim != v.dim:
        raise FormMismatchError(f"Dimensões diferentes: {u.dim} e {v.dim}")


def inner_product(u: AmbientVector, v: AmbientVector) -> float:
    """
    Valor simétrico ⟨u, v⟩ na base comum dos dois vetores.

    Raises:
        FormMismatchError: Se bases ou dimensões diferirem
    """
    _check_pair(u, v)
    return float(form_inner(u.coords, v.coords, u.basis))


def quadratic_form(v: AmbientVector) -> float:
    """q(v) = ⟨v, v⟩."""
    return inner_product(v, v)


def signature_of_frame(
    frame: np.ndarray,
    basis: FormBasis = FormBasis.DIAGONAL,
    tolerance: Optional[float] = None
) -> Signature:
    """
    Assinatura da forma restrita ao span das linhas de ``frame``.

    Args:
        frame: Matriz k × N com os vetores nas linhas
        basis: Base das coordenadas
        tolerance: Banda de zero (relativa a ‖frame‖²)

    Raises:
        DependentVectorsError: Se o posto numérico for menor que k
    """
    tol = settings.numerics.degeneracy_tolerance if tolerance is None else tolerance
    frame = np.atleast_2d(np.asarray(frame, dtype=float))

    singular_values = np.linalg.svd(frame, compute_uv=False)
    if singular_values[0] == 0.0 or singular_values[-1] / singular_values[0] <= tol:
        raise DependentVectorsError(
            f"Vetores dependentes (razão de valores singulares "
            f"{singular_values[-1] / max(singular_values[0], 1e-300):.2e})"
        )

    gram = frame @ gram_matrix(basis, frame.shape[1]) @ frame.T
    gram = 0.5 * (gram + gram.T)
    eigenvalues = np.linalg.eigvalsh(gram)
    scaled = eigenvalues / singular_values[0] ** 2
    neg = int(np.sum(scaled < -tol))
    pos = int(np.sum(scaled > tol))
    return Signature(neg=neg, pos=pos, zero=len(scaled) - neg - pos)


def restricted_signature(basis_vectors: Sequence[AmbientVector]) -> Signature:
    """
    Assinatura de ⟨·,·⟩ restrita ao span dos vetores dados.

    Args:
        basis_vectors: Vetores linearmente independentes, mesma base

    Returns:
        Signature (neg, pos, zero)

    Raises:
        FormMismatchError: Bases/dimensões misturadas
        DependentVectorsError: Vetores dependentes
    """
    vectors = list(basis_vectors)
    if not vectors:
        raise DependentVectorsError("Lista de vetores vazia")
    for other in vectors[1:]:
        _check_pair(vectors[0], other)
    frame = np.vstack([v.coords for v in vectors])
    return signature_of_frame(frame, vectors[0].basis)


def change_basis(v: AmbientVector, to: FormBasis) -> AmbientVector:
    """Reescreve v na base ``to`` (isometria linear fixa entre as duas formas)."""
    if v.basis is to:
        return v
    return AmbientVector(transfer_matrix(v.dim, to) @ v.coords, to)


def convert_matrix(matrix: np.ndarray, source: FormBasis, target: FormBasis) -> np.ndarray:
    """Conjuga uma matriz (ou pilha de matrizes) para a base ``target``."""
    if source is target:
        return np.asarray(matrix, dtype=float)
    dim = np.shape(matrix)[-1]
    t = transfer_matrix(dim, target)
    t_back = transfer_matrix(dim, source)
    return t @ np.asarray(matrix, dtype=float) @ t_back


def basis_vector(index: int, dim: int, basis: FormBasis = FormBasis.DIAGONAL) -> AmbientVector:
    """e_index (0-based) na base indicada."""
    coords = np.zeros(dim)
    coords[index] = 1.0
    return AmbientVector(coords, basis)


def split_basis_in_diagonal(index: int, dim: int) -> np.ndarray:
    """Coordenadas diagonais do vetor split e_index (0-based)."""
    coords = np.zeros(dim)
    coords[index] = 1.0
    return transfer_matrix(dim, FormBasis.DIAGONAL) @ coords
