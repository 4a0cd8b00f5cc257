"""
Modelos de AdS_{1,n} e do universo de Einstein: Klein, conforme e universal.

Um vetor de Klein de dimensão N = d + 2 representa um ponto de Ein_{1,d−1}
(quádrica nula) ou de AdS_{1,d} (q = −1); os modelos conforme e universal
usam x ∈ S^{d−1} ⊂ ℝ^d e o ângulo θ ∈ [0, 2π) ou o tempo t ∈ ℝ.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np

from ..config.settings import settings
from .core_forms import form_inner
from .errors import BoundaryPointError, BranchRequiredError, FormMismatchError
from .groups import canonicalize_rows

TWO_PI = 2.0 * np.pi


class SpaceKind(Enum):
    EIN = "ein"
    ADS = "ads"


class Model(Enum):
    KLEIN = "klein"
    CONFORMAL = "conformal"
    UNIVERSAL = "universal"


class Sheet(Enum):
    """Folha do recobrimento ramificado Ein_{1,n} → AdS̄_{1,n}."""
    PLUS = "plus"
    MINUS = "minus"
    BOUNDARY = "boundary"


def _unit_rows(vectors: np.ndarray) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=float)
    return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)


@dataclass(frozen=True)
class KleinPoint:
    """
    Ponto no modelo de Klein guardado com sinal (modelo S(ℝ^{2,n})).

    Para Ein o representante é euclidianamente unitário; para AdS é
    reescalado para q = −1.
    """
    representative: np.ndarray
    kind: SpaceKind = SpaceKind.EIN
    identify_antipodes: bool = False

    def __post_init__(self):
        rep = np.asarray(self.representative, dtype=float).reshape(-1)
        if rep.shape[0] < 4:
            raise FormMismatchError(f"Vetor de Klein com dimensão {rep.shape[0]} < 4")
        if self.kind is SpaceKind.EIN:
            rep = rep / np.linalg.norm(rep)
            if abs(form_inner(rep, rep)) > settings.numerics.form_tolerance:
                raise ValueError(f"Classe não nula: q = {form_inner(rep, rep):.3e}")
        else:
            q = float(form_inner(rep, rep))
            if q >= 0.0:
                raise ValueError(f"Classe não pertence a AdS: q = {q:.3e}")
            rep = rep / np.sqrt(-q)
        if self.identify_antipodes:
            rep = canonicalize_rows(rep) * (np.linalg.norm(rep))
        rep.setflags(write=False)
        object.__setattr__(self, 'representative', rep)

    @property
    def dim(self) -> int:
        return self.representative.shape[0]

    def projective(self) -> 'KleinPoint':
        """Mesmo ponto no modelo projetivo (classe ±)."""
        return KleinPoint(self.representative, self.kind, identify_antipodes=True)

    def negated(self) -> 'KleinPoint':
        return KleinPoint(-self.representative, self.kind, self.identify_antipodes)


@dataclass(frozen=True)
class ConformalPoint:
    """(x, θ) ∈ S^{d−1} × S¹."""
    x: np.ndarray
    theta: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        if abs(np.linalg.norm(x) - 1.0) > 1e-12:
            x = x / np.linalg.norm(x)
        x.setflags(write=False)
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'theta', float(np.mod(self.theta, TWO_PI)))


@dataclass(frozen=True)
class UniversalPoint:
    """(x, t) ∈ S^{d−1} × ℝ; t em radianos, sem redução."""
    x: np.ndarray
    t: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        if abs(np.linalg.norm(x) - 1.0) > 1e-12:
            x = x / np.linalg.norm(x)
        x.setflags(write=False)
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 't', float(self.t))

    @property
    def d(self) -> int:
        return self.x.shape[0]


class EmbeddedPoint(NamedTuple):
    point: ConformalPoint
    copy: int


Point = Union[KleinPoint, ConformalPoint, UniversalPoint]


# ----------------------------------------------------------------------------
# Conversões vetorizadas
# ----------------------------------------------------------------------------

def universal_to_klein_array(xs: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Representantes unitários (cos t, sen t, x)/√2, um por linha."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ts = np.asarray(ts, dtype=float).reshape(-1)
    reps = np.column_stack([np.cos(ts), np.sin(ts), xs])
    return reps / np.sqrt(2.0)


def klein_to_conformal_array(reps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(x, θ) de representantes nulos com sinal; θ ∈ [0, 2π)."""
    reps = np.atleast_2d(np.asarray(reps, dtype=float))
    radius = np.hypot(reps[:, 0], reps[:, 1])
    xs = reps[:, 2:] / radius[:, None]
    thetas = np.mod(np.arctan2(reps[:, 1], reps[:, 0]), TWO_PI)
    return xs, thetas


def nearest_branch(thetas: np.ndarray, t_center: Union[float, np.ndarray]) -> np.ndarray:
    """Representante θ + 2πk mais próximo de t_center."""
    thetas = np.asarray(thetas, dtype=float)
    return thetas + TWO_PI * np.round((np.asarray(t_center) - thetas) / TWO_PI)


def extend_matrix(matrix: np.ndarray, dim: int) -> np.ndarray:
    """Estende g ∈ O(2,n) a ℝ^{2,n+k} agindo trivialmente nas novas coordenadas."""
    matrix = np.asarray(matrix, dtype=float)
    size = matrix.shape[-1]
    if size == dim:
        return matrix
    if size > dim:
        raise FormMismatchError(f"Matriz {size}×{size} não age em dimensão {dim}")
    extended = np.eye(dim)
    extended[:size, :size] = matrix
    return extended


def act_universal_array(
    matrix: np.ndarray,
    xs: np.ndarray,
    ts: np.ndarray,
    t_center: Union[float, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Ação de um elemento de O(2,n) em pontos universais via modelo de Klein.

    O ramo do tempo é o representante mais próximo de ``t_center``.

    Returns:
        (xs, ts) das imagens
    """
    reps = universal_to_klein_array(xs, ts)
    images = reps @ extend_matrix(matrix, reps.shape[1]).T
    new_xs, thetas = klein_to_conformal_array(images)
    return new_xs, nearest_branch(thetas, t_center)


def act_universal(matrix: np.ndarray, p: UniversalPoint, t_center: Optional[float] = None) -> UniversalPoint:
    center = p.t if t_center is None else t_center
    xs, ts = act_universal_array(matrix, p.x[None, :], np.array([p.t]), center)
    return UniversalPoint(xs[0], ts[0])


# ----------------------------------------------------------------------------
# Conversões ponto a ponto
# ----------------------------------------------------------------------------

def klein_to_conformal(p: KleinPoint) -> ConformalPoint:
    if p.kind is not SpaceKind.EIN:
        raise FormMismatchError("Conversão conforme definida para pontos de Einstein")
    xs, thetas = klein_to_conformal_array(p.representative[None, :])
    return ConformalPoint(xs[0], thetas[0])


def conformal_to_klein(c: ConformalPoint) -> KleinPoint:
    rep = np.concatenate([[np.cos(c.theta), np.sin(c.theta)], c.x]) / np.sqrt(2.0)
    return KleinPoint(rep, SpaceKind.EIN)


def universal_to_conformal(p: UniversalPoint) -> ConformalPoint:
    return ConformalPoint(p.x, np.mod(p.t, TWO_PI))


def conformal_to_universal(c: ConformalPoint, branch: Optional[int] = None) -> UniversalPoint:
    """
    Raises:
        BranchRequiredError: Sem o ramo k (t = θ + 2πk)
    """
    if branch is None:
        raise BranchRequiredError("Conversão conforme → universal exige o ramo k")
    return UniversalPoint(c.x, c.theta + TWO_PI * int(branch))


def convert(point: Point, target: Model, branch: Optional[int] = None) -> Point:
    """
    Converte entre os modelos de Klein, conforme e universal.

    Args:
        point: Ponto de Einstein em qualquer modelo
        target: Modelo de destino
        branch: Ramo k, necessário para chegar ao modelo universal

    Raises:
        BranchRequiredError: Destino universal sem ramo
    """
    if isinstance(point, UniversalPoint):
        if target is Model.UNIVERSAL:
            return point
        conformal = universal_to_conformal(point)
        return conformal if target is Model.CONFORMAL else conformal_to_klein(conformal)

    if isinstance(point, KleinPoint):
        if target is Model.KLEIN:
            return point
        conformal = klein_to_conformal(point)
        return conformal if target is Model.CONFORMAL else conformal_to_universal(conformal, branch)

    if target is Model.CONFORMAL:
        return point
    if target is Model.KLEIN:
        return conformal_to_klein(point)
    return conformal_to_universal(point, branch)


def sigma(p: UniversalPoint, k: int = 1) -> UniversalPoint:
    """σᵏ(x, t) = ((−1)ᵏ x, t + kπ); σ² é a transformação de deck δ."""
    sign = -1.0 if k % 2 else 1.0
    return UniversalPoint(sign * p.x, p.t + k * np.pi)


def klein_inner(p: KleinPoint, q: KleinPoint) -> float:
    """⟨p, q⟩ dos representantes com sinal (base diagonal)."""
    if p.dim != q.dim:
        raise FormMismatchError(f"Dimensões diferentes: {p.dim} e {q.dim}")
    return float(form_inner(p.representative, q.representative))


# ----------------------------------------------------------------------------
# Recobrimento ramificado Ein_{1,n} → AdS̄_{1,n} e cópias conformes de AdS
# ----------------------------------------------------------------------------

def ads_cover_project(p: KleinPoint) -> Tuple[KleinPoint, Sheet]:
    """
    [u:v:x:w] ↦ [u:v:x]; folha pelo sinal de w no representante cuja parte
    (u, v, x) está canonicalizada.

    Returns:
        (ponto de AdS ou da fronteira Ein_{1,n−1}, folha)
    """
    if p.kind is not SpaceKind.EIN:
        raise FormMismatchError("Projeção definida para classes nulas de Ein_{1,n}")
    rep = p.representative
    head = rep[:-1]
    head_unit = canonicalize_rows(head)
    scale = np.linalg.norm(head)
    sign = float(np.dot(head_unit, head)) / scale
    last = rep[-1] * sign

    if abs(rep[-1]) <= settings.numerics.boundary_band:
        return KleinPoint(head_unit, SpaceKind.EIN), Sheet.BOUNDARY

    sheet = Sheet.PLUS if last > 0.0 else Sheet.MINUS
    return KleinPoint(head_unit, SpaceKind.ADS), sheet


def ads_cover_lift(p: KleinPoint, sheet: Sheet) -> KleinPoint:
    """
    Pré-imagem explícita (u, v, x, ±√(−q)) de um ponto de AdS̄ numa folha.

    Pontos da fronteira (classes nulas) têm a única pré-imagem (u, v, x, 0).
    """
    head = canonicalize_rows(p.representative)
    if p.kind is SpaceKind.EIN or sheet is Sheet.BOUNDARY:
        if p.kind is not SpaceKind.EIN:
            raise ValueError("Folha BOUNDARY exige ponto da fronteira")
        return KleinPoint(np.append(head, 0.0), SpaceKind.EIN)
    q = float(form_inner(head, head))
    last = np.sqrt(-q) if sheet is Sheet.PLUS else -np.sqrt(-q)
    return KleinPoint(np.append(head, last), SpaceKind.EIN)


def ads_cover_preimages(p: KleinPoint) -> List[KleinPoint]:
    """Duas pré-imagens para pontos de AdS, uma para pontos da fronteira."""
    if p.kind is SpaceKind.EIN:
        return [ads_cover_lift(p, Sheet.BOUNDARY)]
    return [ads_cover_lift(p, Sheet.PLUS), ads_cover_lift(p, Sheet.MINUS)]


def ads_klein_to_einstein(p: KleinPoint) -> KleinPoint:
    """Ponto de AdS (q = −1) como ponto da cópia superior de Ein_{1,n}."""
    if p.kind is not SpaceKind.ADS:
        raise FormMismatchError("Esperado ponto de AdS")
    return KleinPoint(np.append(p.representative, 1.0), SpaceKind.EIN)


def ads_conformal_embed(x: np.ndarray, theta: float) -> EmbeddedPoint:
    """
    Inclusão H^n × S¹ ⊂ S^n × S¹: hemisfério superior é a cópia 1, inferior a 2.

    Raises:
        BoundaryPointError: x no equador (fronteira conforme Ein_{1,n−1})
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    x = x / np.linalg.norm(x)
    last = x[-1]
    if abs(last) <= settings.numerics.boundary_band:
        raise BoundaryPointError("Ponto no equador pertence à fronteira conforme")
    return EmbeddedPoint(ConformalPoint(x, theta), 1 if last > 0.0 else 2)
