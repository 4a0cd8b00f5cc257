"""
Estrutura causal do espaço universal de Einstein S^{d−1} × ℝ.

Classificação de pares, futuro/passado de compactos amostrados, certificação
de acausalidade e domínios afins.
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import settings
from ..utils.logger import get_logger
from .core_forms import form_inner
from .einstein_models import UniversalPoint, universal_to_klein_array
from .errors import NotAcausalError

logger = get_logger(__name__)


class CausalRelation(Enum):
    TIMELIKE = "TimelikeRelated"
    LIGHTLIKE = "LightlikeRelated"
    UNRELATED = "Unrelated"


class Orientation(Enum):
    FUTURE = "future"
    PAST = "past"


class AcausalityMode(Enum):
    ACAUSAL = "acausal"
    ACHRONAL = "achronal"


class Contraction(Enum):
    LIPSCHITZ1 = "lipschitz1"
    STRICT = "strict"


def sphere_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    d₀ entre vetores unitários (em lote, com broadcast).

    2·atan2(‖x−y‖, ‖x+y‖): sem NaN nos antípodas e preciso perto de 0 e de π.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 2.0 * np.arctan2(np.linalg.norm(x - y, axis=-1), np.linalg.norm(x + y, axis=-1))


def sphere_distance_matrix(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Matriz |xs| × |ys| de distâncias d₀."""
    xs = np.atleast_2d(xs)
    ys = np.atleast_2d(ys)
    return sphere_distance(xs[:, None, :], ys[None, :, :])


def iter_chunks(total: int, size: Optional[int] = None):
    size = settings.domain.chunk_size if size is None else size
    for start in range(0, total, size):
        yield slice(start, min(start + size, total))


@dataclass(frozen=True)
class CompactSample:
    """Amostra finita de um compacto com densidade declarada ``mesh``."""
    xs: np.ndarray
    ts: np.ndarray
    mesh: float

    def __post_init__(self):
        xs = np.atleast_2d(np.asarray(self.xs, dtype=float))
        ts = np.asarray(self.ts, dtype=float).reshape(-1)
        if xs.shape[0] == 0 or xs.shape[0] != ts.shape[0]:
            raise ValueError("Amostra compacta vazia ou inconsistente")
        if self.mesh <= 0.0:
            raise ValueError(f"mesh deve ser positiva: {self.mesh}")
        object.__setattr__(self, 'xs', xs)
        object.__setattr__(self, 'ts', ts)

    @classmethod
    def from_points(cls, points: Sequence[UniversalPoint], mesh: float) -> 'CompactSample':
        return cls(np.vstack([p.x for p in points]), np.array([p.t for p in points]), mesh)

    def __len__(self) -> int:
        return self.ts.shape[0]


def future_envelope(sample: CompactSample, xs: np.ndarray) -> np.ndarray:
    """f(x) = min_i {tᵢ + d₀(x, xᵢ)} (fronteira de J⁺(K))."""
    xs = np.atleast_2d(xs)
    values = np.empty(xs.shape[0])
    for block in iter_chunks(xs.shape[0]):
        values[block] = np.min(sphere_distance_matrix(xs[block], sample.xs) + sample.ts[None, :], axis=1)
    return values


def past_envelope(sample: CompactSample, xs: np.ndarray) -> np.ndarray:
    """g(x) = max_i {tᵢ − d₀(x, xᵢ)} (fronteira de J⁻(K))."""
    xs = np.atleast_2d(xs)
    values = np.empty(xs.shape[0])
    for block in iter_chunks(xs.shape[0]):
        values[block] = np.max(sample.ts[None, :] - sphere_distance_matrix(xs[block], sample.xs), axis=1)
    return values


@dataclass(frozen=True)
class AchronalGraph:
    """Gráfico amostrado de uma função 1-Lipschitz sobre uma esfera."""
    domain_points: np.ndarray
    values: np.ndarray
    contraction: Contraction = Contraction.LIPSCHITZ1

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.domain_points, dtype=float))
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if points.shape[0] != values.shape[0]:
            raise ValueError("Pontos e valores com tamanhos diferentes")
        object.__setattr__(self, 'domain_points', points)
        object.__setattr__(self, 'values', values)

    def __len__(self) -> int:
        return self.values.shape[0]

    def lipschitz_defect(self) -> float:
        """max_{i≠j} (|fᵢ − fⱼ| − d₀(xᵢ, xⱼ)); ≤ 0 para gráficos 1-Lipschitz."""
        worst = -np.inf
        for block in iter_chunks(len(self)):
            distances = sphere_distance_matrix(self.domain_points[block], self.domain_points)
            jumps = np.abs(self.values[block, None] - self.values[None, :])
            defect = jumps - distances
            rows = np.arange(block.start, block.stop)
            defect[rows - block.start, rows] = -np.inf
            worst = max(worst, float(np.max(defect)))
        return worst

    def is_valid(self, tolerance: float = 1e-9) -> bool:
        defect = self.lipschitz_defect()
        if self.contraction is Contraction.STRICT:
            return defect < tolerance and defect < 0.0
        return defect <= tolerance

    def points(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.domain_points, self.values


@dataclass(frozen=True)
class AffineDomainU:
    """Laje S^{d−1} × (t0, t0 + π); forma de Klein ⟨p, p0⟩ < 0."""
    t0: float
    width: float = np.pi

    def contains(self, p: UniversalPoint) -> bool:
        return self.t0 < p.t < self.t0 + self.width

    def base_point(self, dim: int) -> np.ndarray:
        """p0 = (cos c, sen c, 0, …) com c = t0 + π/2."""
        center = self.t0 + self.width / 2.0
        p0 = np.zeros(dim)
        p0[0], p0[1] = np.cos(center), np.sin(center)
        return p0

    def contains_klein(self, representative: np.ndarray) -> bool:
        rep = np.asarray(representative, dtype=float)
        return bool(form_inner(rep, self.base_point(rep.shape[0])) < 0.0)


def causal_classify_array(
    xs1: np.ndarray, ts1: np.ndarray, xs2: np.ndarray, ts2: np.ndarray,
    band: Optional[float] = None
) -> np.ndarray:
    """
    Classificação em lote: 0 = Unrelated, 1 = Lightlike, 2 = Timelike.
    """
    band = settings.numerics.lightlike_band if band is None else band
    slack = sphere_distance(xs1, xs2) - np.abs(np.asarray(ts1) - np.asarray(ts2))
    codes = np.where(slack > band, 0, np.where(slack < -band, 2, 1))
    return codes


_CODE_TO_RELATION = {0: CausalRelation.UNRELATED, 1: CausalRelation.LIGHTLIKE, 2: CausalRelation.TIMELIKE}


def causal_classify(p: UniversalPoint, q: UniversalPoint) -> CausalRelation:
    """
    TimelikeRelated sse d₀ < |Δt|, LightlikeRelated na banda, Unrelated sse d₀ > |Δt|.
    """
    if p.d != q.d:
        raise ValueError(f"Dimensões diferentes: {p.d} e {q.d}")
    code = int(causal_classify_array(p.x, p.t, q.x, q.t))
    return _CODE_TO_RELATION[code]


def klein_classify(p: UniversalPoint, q: UniversalPoint) -> CausalRelation:
    """
    Caminho cruzado pelo sinal de ⟨lift p, lift q⟩ = (cos d₀ − cos Δt)/2
    (válido para |Δt| ≤ π).
    """
    reps = universal_to_klein_array(np.vstack([p.x, q.x]), np.array([p.t, q.t]))
    value = float(form_inner(reps[0], reps[1]))
    if value < 0.0:
        return CausalRelation.UNRELATED
    if value > 0.0:
        return CausalRelation.TIMELIKE
    return CausalRelation.LIGHTLIKE


def in_future_of(sample: CompactSample, p: UniversalPoint, orientation: Orientation = Orientation.FUTURE) -> bool:
    """
    Pertinência a J⁺(K) (t ≥ f(x)) ou J⁻(K) (t ≤ g(x)); erro de até ``mesh``.
    """
    if orientation is Orientation.FUTURE:
        return bool(p.t >= future_envelope(sample, p.x)[0])
    return bool(p.t <= past_envelope(sample, p.x)[0])


class AcausalityReport(NamedTuple):
    certified: bool
    worst_pair: Optional[Tuple[int, int]]
    worst_slack: float


def acausality_report(
    xs: np.ndarray, ts: np.ndarray, mode: AcausalityMode = AcausalityMode.ACAUSAL
) -> AcausalityReport:
    """
    Folga mínima d₀ − |Δt| entre pares distintos e o par que a realiza.
    """
    xs = np.atleast_2d(xs)
    ts = np.asarray(ts, dtype=float).reshape(-1)
    band = settings.numerics.lightlike_band
    count = ts.shape[0]
    if count < 2:
        return AcausalityReport(True, None, np.inf)

    worst, worst_pair = np.inf, None
    for block in iter_chunks(count):
        slack = sphere_distance_matrix(xs[block], xs) - np.abs(ts[block, None] - ts[None, :])
        rows = np.arange(block.start, block.stop)
        slack[rows[:, None] >= np.arange(count)[None, :]] = np.inf
        index = np.unravel_index(np.argmin(slack), slack.shape)
        if slack[index] < worst:
            worst = float(slack[index])
            worst_pair = (int(rows[index[0]]), int(index[1]))

    if mode is AcausalityMode.ACAUSAL:
        certified = worst > band
    else:
        certified = worst >= -band
    return AcausalityReport(bool(certified), worst_pair, worst)


def certify_acausal(points: Sequence[UniversalPoint], mode: AcausalityMode = AcausalityMode.ACAUSAL) -> bool:
    """
    Acausal: todos os pares Unrelated (a banda tipo-luz conta como falha);
    acronal: nenhum par tipo-tempo.
    """
    points = list(points)
    if len(points) < 2:
        return True
    xs = np.vstack([p.x for p in points])
    ts = np.array([p.t for p in points])
    return acausality_report(xs, ts, mode).certified


def time_spread(ts: np.ndarray) -> float:
    ts = np.asarray(ts, dtype=float)
    return float(ts.max() - ts.min()) if ts.size else 0.0


def bounding_affine_domain_array(xs: np.ndarray, ts: np.ndarray) -> AffineDomainU:
    report = acausality_report(xs, ts, AcausalityMode.ACAUSAL)
    if not report.certified:
        raise NotAcausalError(
            f"Conjunto não acausal (folga mínima {report.worst_slack:.3e})",
            report.worst_pair
        )
    ts = np.asarray(ts, dtype=float)
    return AffineDomainU((ts.min() + ts.max()) / 2.0 - np.pi / 2.0)


def bounding_affine_domain(points: Sequence[UniversalPoint]) -> AffineDomainU:
    """
    Laje centrada t0 = (m + M)/2 − π/2 contendo os pontos.

    Raises:
        NotAcausalError: Se os pontos não forem acausais
    """
    points = list(points)
    if not points:
        raise ValueError("Conjunto vazio")
    xs = np.vstack([p.x for p in points])
    ts = np.array([p.t for p in points])
    return bounding_affine_domain_array(xs, ts)
