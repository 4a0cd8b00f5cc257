"""
Elementos de O(2,n): validação, decomposição de Cartan g = k·a·l,
dados de P₁-divergência (gap e polos) e ação projetiva.

Todas as contas internas são feitas na base diagonal; elementos guardados na
base split são conjugados na entrada e os resultados devolvidos na base
diagonal.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag, polar
from scipy.stats import ortho_group, special_ortho_group

from ..config.settings import settings
from ..utils.logger import get_logger
from .core_forms import (
    AmbientVector,
    FormBasis,
    convert_matrix,
    gram_matrix,
    split_basis_in_diagonal,
    transfer_matrix,
)
from .errors import AmbiguousPolesError, CartanFailureError, FormMismatchError, NotInGroupError

logger = get_logger(__name__)


def canonicalize_rows(vectors: np.ndarray, band: Optional[float] = None) -> np.ndarray:
    """
    Normaliza cada linha e fixa o sinal (primeira coordenada não nula positiva).

    Args:
        vectors: Array (..., N)
        band: Banda de zero para decidir a "primeira coordenada não nula"

    Returns:
        Array com linhas unitárias canonicalizadas
    """
    band = settings.numerics.canonical_zero_band if band is None else band
    vectors = np.asarray(vectors, dtype=float)
    norms = np.linalg.norm(vectors, axis=-1, keepdims=True)
    unit = vectors / np.where(norms == 0.0, 1.0, norms)
    significant = np.abs(unit) > band
    first = np.argmax(significant, axis=-1)
    pivot = np.take_along_axis(unit, first[..., None], axis=-1)
    sign = np.where(pivot < 0.0, -1.0, 1.0)
    return unit * sign


def projective_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Distância angular entre as retas de x e y (vetores unitários, em lote).

    Usa min(‖x−y‖, ‖x+y‖) = 2 sen(θ/2), estável para ângulos pequenos.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    chord = np.minimum(np.linalg.norm(x - y, axis=-1), np.linalg.norm(x + y, axis=-1))
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))


@dataclass(frozen=True)
class ProjectivePoint:
    """Classe projetiva com representante unitário canonicalizado."""
    representative: np.ndarray
    basis: FormBasis = FormBasis.DIAGONAL

    def __post_init__(self):
        rep = canonicalize_rows(np.asarray(self.representative, dtype=float).reshape(-1))
        if not np.isfinite(rep).all() or np.linalg.norm(rep) == 0.0:
            raise ValueError("Representante projetivo inválido")
        rep.setflags(write=False)
        object.__setattr__(self, 'representative', rep)

    @property
    def dim(self) -> int:
        return self.representative.shape[0]

    def vector(self) -> AmbientVector:
        return AmbientVector(self.representative, self.basis)

    def in_basis(self, basis: FormBasis) -> 'ProjectivePoint':
        if basis is self.basis:
            return self
        return ProjectivePoint(convert_vector(self.representative, self.basis, basis), basis)

    def distance(self, other: 'ProjectivePoint') -> float:
        """Métrica angular d(p, p′) entre as retas."""
        other = other.in_basis(self.basis)
        return float(projective_distance(self.representative, other.representative))


def convert_vector(coords: np.ndarray, source: FormBasis, target: FormBasis) -> np.ndarray:
    if source is target:
        return np.asarray(coords, dtype=float)
    coords = np.asarray(coords, dtype=float)
    return coords @ transfer_matrix(coords.shape[-1], target).T


def form_residual(matrices: np.ndarray, basis: FormBasis = FormBasis.DIAGONAL) -> np.ndarray:
    """‖gᵀJg − J‖_F / ‖J‖_F para uma matriz ou pilha de matrizes."""
    matrices = np.asarray(matrices, dtype=float)
    gram = gram_matrix(basis, matrices.shape[-1])
    defect = np.swapaxes(matrices, -1, -2) @ gram @ matrices - gram
    return np.linalg.norm(defect, axis=(-2, -1)) / np.linalg.norm(gram)


@dataclass(frozen=True)
class GroupElement:
    """Matriz validada de O(2,n) com dados de Cartan em cache."""
    matrix: np.ndarray
    basis: FormBasis = FormBasis.DIAGONAL
    form_residual: float = 0.0

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.dim - 2

    @cached_property
    def diagonal(self) -> np.ndarray:
        """Matriz na base diagonal."""
        return convert_matrix(self.matrix, self.basis, FormBasis.DIAGONAL)

    @cached_property
    def cartan(self) -> 'CartanFactors':
        return cartan_decompose(self)

    def __matmul__(self, other: 'GroupElement') -> 'GroupElement':
        return compose(self, other)


class CartanFactors(NamedTuple):
    """g = k · a(λ, μ) · l com k, l ∈ O(2)×O(n) (base diagonal)."""
    k: GroupElement
    a_exponents: Tuple[float, float]
    l: GroupElement

    def a_matrix(self) -> np.ndarray:
        lam, mu = self.a_exponents
        return weyl_matrix(lam, mu, self.k.n)

    def reconstruct(self) -> np.ndarray:
        return self.k.matrix @ self.a_matrix() @ self.l.matrix


class P1Data(NamedTuple):
    gap: float
    p_plus: ProjectivePoint
    p_minus: ProjectivePoint


def _wrap(matrix: np.ndarray, basis: FormBasis = FormBasis.DIAGONAL) -> GroupElement:
    """Elemento sem validação (produtos de elementos já validados)."""
    return GroupElement(matrix, basis, float(form_residual(matrix, basis)))


def validate(
    matrix,
    basis: FormBasis = FormBasis.DIAGONAL,
    tolerance: Optional[float] = None
) -> GroupElement:
    """
    Valida uma matriz como elemento de O(2,n).

    Args:
        matrix: Matriz quadrada (n+2)×(n+2)
        basis: Base em que a matriz está escrita
        tolerance: Tolerância relativa do resíduo da forma

    Returns:
        GroupElement com o resíduo registrado

    Raises:
        FormMismatchError: Matriz não quadrada ou pequena demais
        NotInGroupError: Resíduo acima da tolerância
    """
    tol = settings.numerics.form_tolerance if tolerance is None else tolerance
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise FormMismatchError(f"Matriz não quadrada: shape {matrix.shape}")
    if matrix.shape[0] < 4:
        raise FormMismatchError(f"Dimensão {matrix.shape[0]} < 4 (n >= 2)")
    if not np.all(np.isfinite(matrix)):
        raise NotInGroupError(float('inf'), tol)

    residual = float(form_residual(matrix, basis))
    if residual > tol:
        raise NotInGroupError(residual, tol)

    det = np.linalg.det(matrix)
    if abs(abs(det) - 1.0) > max(tol, 1e-14 * np.linalg.norm(matrix) ** 2):
        raise NotInGroupError(abs(abs(det) - 1.0), tol)

    return GroupElement(matrix, basis, residual)


def identity(n: int) -> GroupElement:
    return GroupElement(np.eye(n + 2), FormBasis.DIAGONAL, 0.0)


def weyl_matrix(lam: float, mu: float, n: int, basis: FormBasis = FormBasis.DIAGONAL) -> np.ndarray:
    """
    Matriz a(λ, μ) da câmara de Weyl.

    Na base split é diag(e^λ, e^μ, 1, …, 1, e^{−μ}, e^{−λ}); na base diagonal é o
    boost de rapidez λ no plano (u, x₁) composto com o de rapidez μ em (v, x₂).
    """
    dim = n + 2
    if basis is FormBasis.SPLIT:
        diag = np.ones(dim)
        diag[0], diag[-1] = np.exp(lam), np.exp(-lam)
        diag[1], diag[-2] = np.exp(mu), np.exp(-mu)
        return np.diag(diag)
    a = np.eye(dim)
    for (i, j), r in (((0, 2), lam), ((1, 3), mu)):
        a[i, i] = a[j, j] = np.cosh(r)
        a[i, j] = a[j, i] = np.sinh(r)
    return a


def boost_element(lam: float, mu: float, n: int) -> GroupElement:
    """a(λ, μ) como GroupElement na base diagonal."""
    return GroupElement(weyl_matrix(lam, mu, n), FormBasis.DIAGONAL, 0.0)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    return _wrap(g.diagonal @ h.diagonal)


def inverse(g: GroupElement) -> GroupElement:
    """g⁻¹ = J gᵀ J (exato, sem resolver sistema)."""
    gram = gram_matrix(g.basis, g.dim)
    return GroupElement(gram @ g.matrix.T @ gram, g.basis, g.form_residual)


def power(g: GroupElement, k: int) -> GroupElement:
    base = g.diagonal if k >= 0 else inverse(g).diagonal
    return _wrap(np.linalg.matrix_power(base, abs(k)))


def random_compact(rng: np.random.Generator, n: int, identity_component: bool = True) -> np.ndarray:
    """Elemento aleatório de SO(2)×SO(n) (ou O(2)×O(n)) na base diagonal."""
    sampler = special_ortho_group if identity_component else ortho_group
    return block_diag(sampler.rvs(2, random_state=rng), sampler.rvs(n, random_state=rng))


def random_element(
    rng: np.random.Generator,
    n: int,
    lambda_max: float = 5.0
) -> Tuple[GroupElement, float, float]:
    """
    Produto K·A⁺·K aleatório na componente da identidade.

    Returns:
        (g, λ, μ) com λ ≥ μ ≥ 0 os expoentes usados na construção
    """
    lam = float(rng.uniform(0.0, lambda_max))
    mu = float(rng.uniform(0.0, lam))
    matrix = random_compact(rng, n) @ weyl_matrix(lam, mu, n) @ random_compact(rng, n)
    return _wrap(matrix), lam, mu


def cartan_decompose(g: GroupElement) -> CartanFactors:
    """
    Decomposição g = k · a(λ, μ) · l.

    Decomposição polar g = u·s; o bloco 2×n fora da diagonal de s tem SVD
    U·diag(senh λ, senh μ)·Vᵀ, e k₀ = diag(U, V) conjuga s em a(λ, μ).
    Funciona em todo O(2,n): fora da componente da identidade o fator k
    carrega a componente.

    Raises:
        CartanFailureError: Reconstrução acima da tolerância
    """
    matrix = g.diagonal
    n = g.n
    u, s = polar(matrix)

    block = 0.5 * (s[:2, 2:] + s[2:, :2].T)
    if np.max(np.abs(block)) <= settings.numerics.canonical_zero_band:
        k0 = np.eye(n + 2)
        sinh_values = np.zeros(2)
    else:
        left, sinh_values, right_t = np.linalg.svd(block, full_matrices=True)
        k0 = block_diag(left, right_t.T)

    lam, mu = (float(v) for v in np.arcsinh(sinh_values))
    k = u @ k0
    l = k0.T

    factors = CartanFactors(
        k=GroupElement(k, FormBasis.DIAGONAL, float(form_residual(k))),
        a_exponents=(lam, mu),
        l=GroupElement(l, FormBasis.DIAGONAL, float(form_residual(l)))
    )

    error = np.linalg.norm(factors.reconstruct() - matrix) / np.linalg.norm(matrix)
    if error > settings.numerics.cartan_tolerance:
        logger.warning("Reconstrução de Cartan imprecisa", error=float(error))
        raise CartanFailureError(f"Reconstrução k·a·l com erro relativo {error:.2e}")

    return factors


def is_identity_component(g: GroupElement) -> bool:
    """
    Verdadeiro sse det g = +1 e a parte K polar (k·l) preserva a orientação
    do bloco negativo 2×2.
    """
    if np.linalg.det(g.diagonal) <= 0.0:
        return False
    factors = g.cartan
    compact = factors.k.matrix @ factors.l.matrix
    return bool(np.linalg.det(compact[:2, :2]) > 0.0)


def _pole_directions(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    e_first = split_basis_in_diagonal(0, dim)
    e_last = split_basis_in_diagonal(dim - 1, dim)
    return e_first / np.linalg.norm(e_first), e_last / np.linalg.norm(e_last)


def p1_data(g: GroupElement) -> P1Data:
    """
    Gap λ − μ e polos p₊ = k[e₁], p₋ = l⁻¹[e_{n+2}] (base diagonal).

    Raises:
        AmbiguousPolesError: gap ≤ tolerância (k, l não únicos)
    """
    factors = g.cartan
    lam, mu = factors.a_exponents
    gap = lam - mu
    if gap <= settings.numerics.ambiguous_gap:
        raise AmbiguousPolesError(gap)
    e_first, e_last = _pole_directions(g.dim)
    p_plus = factors.k.matrix @ e_first
    p_minus = factors.l.matrix.T @ e_last
    return P1Data(gap, ProjectivePoint(p_plus), ProjectivePoint(p_minus))


def p1_data_batch(matrices: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Versão em lote via SVD euclidiana (valores singulares e^λ, e^μ, …).

    Args:
        matrices: Pilha (W, N, N) na base diagonal

    Returns:
        (gaps, p_plus, p_minus) com p± como linhas unitárias canonicalizadas
    """
    left, singular, right_t = np.linalg.svd(matrices)
    gaps = np.log(singular[:, 0]) - np.log(singular[:, 1])
    gram = gram_matrix(FormBasis.DIAGONAL, matrices.shape[-1])
    p_plus = canonicalize_rows(left[:, :, 0])
    p_minus = canonicalize_rows(right_t[:, 0, :] @ gram)
    return gaps, p_plus, p_minus


def act_projective(g: GroupElement, p: ProjectivePoint) -> ProjectivePoint:
    """Classe de g·x, renormalizada e canonicalizada (base diagonal)."""
    x = p.in_basis(FormBasis.DIAGONAL).representative
    return ProjectivePoint(g.diagonal @ x)


def act_projective_array(matrix: np.ndarray, points: np.ndarray) -> np.ndarray:
    """g aplicado a linhas unitárias; resultado canonicalizado."""
    return canonicalize_rows(np.asarray(points) @ np.asarray(matrix).T)


def attracting_point(
    g: GroupElement,
    iterations: Optional[int] = None,
    seed: Optional[np.ndarray] = None
) -> ProjectivePoint:
    """
    Ponto fixo atrator de g por iteração de potência em g^{2^k}.

    Args:
        g: Elemento (esperado proximal)
        iterations: k máximo (padrão das configurações)
        seed: Vetor inicial; padrão é o polo de Cartan p₊ ou e₁

    Returns:
        ProjectivePoint do autovetor dominante
    """
    k_max = settings.sampling.power_iterations if iterations is None else iterations
    vector = _attracting_vector(g.diagonal, k_max, seed)
    return ProjectivePoint(vector)


def _attracting_vector(matrix: np.ndarray, k_max: int, seed: Optional[np.ndarray]) -> np.ndarray:
    if seed is None:
        left, _, _ = np.linalg.svd(matrix)
        seed = left[:, 0]
    x = canonicalize_rows(np.asarray(seed, dtype=float))

    squared = matrix / np.linalg.norm(matrix)
    for _ in range(k_max):
        squared = squared @ squared
        squared = squared / np.linalg.norm(squared)
        candidate = canonicalize_rows(squared @ x)
        if np.linalg.norm(candidate - x) < 1e-14:
            return candidate
        x = candidate

    for _ in range(64):
        candidate = canonicalize_rows(matrix @ x)
        if np.linalg.norm(candidate - x) < 1e-13:
            return candidate
        x = candidate

    # Convergência lenta: autovetor dominante
    eigenvalues, eigenvectors = np.linalg.eig(matrix)
    dominant = eigenvectors[:, np.argmax(np.abs(eigenvalues))]
    logger.debug("Iteração de potência estagnou; usando autovetor denso")
    return canonicalize_rows(np.real(dominant))


def attracting_points_batch(
    matrices: np.ndarray,
    seeds: np.ndarray,
    iterations: Optional[int] = None
) -> np.ndarray:
    """Refinamento em lote dos polos de Cartan para pontos fixos atratores."""
    k_max = settings.sampling.power_iterations if iterations is None else iterations
    squared = matrices / np.linalg.norm(matrices, axis=(1, 2), keepdims=True)
    x = canonicalize_rows(seeds)
    for _ in range(k_max):
        squared = squared @ squared
        squared = squared / np.linalg.norm(squared, axis=(1, 2), keepdims=True)
        x = canonicalize_rows(np.einsum('wij,wj->wi', squared, x))

    residual = projective_distance(canonicalize_rows(np.einsum('wij,wj->wi', matrices, x)), x)
    stalled = np.flatnonzero(residual > 1e-10)
    for index in stalled:
        x[index] = _attracting_vector(matrices[index], 0, x[index])
    return x
