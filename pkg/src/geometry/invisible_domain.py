"""
Domínio invisível Ω(Λ) de um conjunto limite levantado.

Λ ⊂ S^{n−1} × ℝ é mergulhado como (x₀, 0) ∈ S^n; Ω = {f⁻(x) < t < f⁺(x)} no
espaço universal S^n × ℝ, com componentes E₁ (hemisfério superior), E₂ e a
fronteira conforme no equador.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..config.settings import default_horizon_band, settings
from ..utils.logger import get_logger
from .causality import (
    AchronalGraph,
    AffineDomainU,
    CompactSample,
    bounding_affine_domain_array,
    future_envelope,
    iter_chunks,
    past_envelope,
    sphere_distance_matrix,
)
from .einstein_models import UniversalPoint
from .errors import EmptyBoundaryError, OracleDisagreementError
from .limit_sets import LimitSetSample, lift_acausal

logger = get_logger(__name__)


class Side(Enum):
    PLUS = "plus"
    MINUS = "minus"


class Component(Enum):
    E1 = "E1"
    E2 = "E2"
    BOUNDARY_EIN = "BoundaryEin"


class RegionLabel(Enum):
    FUTURE_CORE = "FutureCore"
    PAST_CORE = "PastCore"
    PAST_OF_BOUNDARY = "PastOfBoundary"
    FUTURE_OF_BOUNDARY = "FutureOfBoundary"
    CONFORMAL_BOUNDARY = "ConformalBoundary"
    FUTURE_HORIZON = "FutureHorizon"
    PAST_HORIZON = "PastHorizon"
    OUTSIDE_OMEGA = "OutsideOmega"


FUTURE_SIDE_LABELS = frozenset({
    RegionLabel.FUTURE_CORE, RegionLabel.PAST_OF_BOUNDARY, RegionLabel.FUTURE_HORIZON
})


class RegionClassification(NamedTuple):
    """Rótulo do lado futuro e, exposto à parte, o rótulo do lado passado."""
    label: RegionLabel
    past_label: Optional[RegionLabel] = None
    future_slack: Optional[float] = None
    past_slack: Optional[float] = None


@dataclass(frozen=True)
class RegionGrid:
    labels: List[RegionLabel]
    past_labels: List[Optional[RegionLabel]]
    boundary_empty: bool = False

    def counts(self) -> dict:
        out: dict = {}
        for label in self.labels:
            out[label.value] = out.get(label.value, 0) + 1
        return out


def boundary_grid(n: int, size: Optional[int] = None, seed: Optional[int] = None) -> np.ndarray:
    """
    Grade de pontos unitários de S^{n−1} ⊂ ℝⁿ.

    Círculo uniforme para n = 2, esfera de Fibonacci para n = 3 e amostragem
    normal semeada acima disso.
    """
    size = settings.domain.boundary_grid_size if size is None else size
    if n == 2:
        angles = 2.0 * np.pi * np.arange(size) / size
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if n == 3:
        index = np.arange(size) + 0.5
        z = 1.0 - 2.0 * index / size
        radius = np.sqrt(1.0 - z ** 2)
        phi = np.pi * (3.0 - np.sqrt(5.0)) * index
        return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])
    rng = np.random.default_rng(settings.sampling.seed if seed is None else seed)
    points = rng.standard_normal((size, n))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def embed_equator(xs: np.ndarray) -> np.ndarray:
    """x₀ ∈ S^{n−1} ↦ (x₀, 0) ∈ S^n."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    return np.column_stack([xs, np.zeros(xs.shape[0])])


@dataclass(frozen=True)
class InvisibleDomain:
    """Ω(Λ) imutável construído de uma amostra levantada."""
    sample: LimitSetSample
    mesh: float
    hemisphere_axis: np.ndarray = field(init=False)
    lambda_sample: CompactSample = field(init=False, repr=False)

    def __post_init__(self):
        if not self.sample.has_lift:
            raise ValueError("Amostra sem levantamento universal (use lift_acausal)")
        if self.mesh <= 0.0:
            raise ValueError(f"mesh deve ser positiva: {self.mesh}")
        embedded = embed_equator(self.sample.lift_xs)
        axis = np.zeros(embedded.shape[1])
        axis[-1] = 1.0
        object.__setattr__(self, 'hemisphere_axis', axis)
        object.__setattr__(self, 'lambda_sample', CompactSample(embedded, self.sample.lift_ts, self.mesh))

    @classmethod
    def build(cls, sample: LimitSetSample, mesh: Optional[float] = None) -> 'InvisibleDomain':
        """Levanta a amostra (se necessário) e constrói Ω."""
        mesh = settings.domain.mesh if mesh is None else mesh
        if not sample.has_lift:
            sample = lift_acausal(sample)
        domain = cls(sample, mesh)
        logger.debug("Domínio invisível construído", points=len(sample), mesh=mesh, n=domain.n)
        return domain

    @property
    def n(self) -> int:
        """Dimensão n de AdS_{1,n}; pontos de Ω vivem em S^n × ℝ."""
        return self.lambda_sample.xs.shape[1] - 1

    @property
    def lambda_xs(self) -> np.ndarray:
        return self.lambda_sample.xs

    @property
    def lambda_ts(self) -> np.ndarray:
        return self.lambda_sample.ts

    def time_window(self) -> Tuple[float, float]:
        """(M − π, m + π): fora dessa janela nenhum ponto é invisível."""
        return float(self.lambda_ts.max() - np.pi), float(self.lambda_ts.min() + np.pi)

    def affine_domain(self) -> AffineDomainU:
        return bounding_affine_domain_array(self.lambda_xs, self.lambda_ts)

    # ------------------------------------------------------------------
    # Envelopes
    # ------------------------------------------------------------------

    def f_plus(self, xs: np.ndarray) -> np.ndarray:
        """f⁺(x) = inf_{Λ} {t₀ + d₀(x, x₀)}."""
        return future_envelope(self.lambda_sample, xs)

    def f_minus(self, xs: np.ndarray) -> np.ndarray:
        """f⁻(x) = sup_{Λ} {t₀ − d₀(x, x₀)}."""
        return past_envelope(self.lambda_sample, xs)

    def envelope(self, side: Side, xs: np.ndarray) -> np.ndarray:
        return self.f_plus(xs) if side is Side.PLUS else self.f_minus(xs)

    # ------------------------------------------------------------------
    # Pertinência
    # ------------------------------------------------------------------

    def contains_array(self, xs: np.ndarray, ts: np.ndarray, margin: Optional[float] = None) -> np.ndarray:
        """f⁻(x) + margem < t < f⁺(x) − margem (margem padrão = mesh)."""
        margin = self.mesh if margin is None else margin
        xs = np.atleast_2d(xs)
        ts = np.asarray(ts, dtype=float).reshape(-1)
        return (self.f_minus(xs) + margin < ts) & (ts < self.f_plus(xs) - margin)

    def dual_cone_array(self, xs: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """
        Teste do cone dual: dentro da janela de tempo, ⟨p, λ⟩ < 0 para todo λ,
        i.e. cos d₀ − cos(t − t₀) < 0.
        """
        xs = np.atleast_2d(xs)
        ts = np.asarray(ts, dtype=float).reshape(-1)
        low, high = self.time_window()
        inside = (ts > low) & (ts < high)
        result = np.zeros(ts.shape[0], dtype=bool)
        for block in iter_chunks(ts.shape[0]):
            distances = sphere_distance_matrix(xs[block], self.lambda_xs)
            pairing = np.cos(distances) - np.cos(ts[block, None] - self.lambda_ts[None, :])
            result[block] = np.all(pairing < 0.0, axis=1)
        return result & inside

    def dual_cone_contains(self, p: UniversalPoint) -> bool:
        return bool(self.dual_cone_array(p.x[None, :], np.array([p.t]))[0])

    def contains(self, p: UniversalPoint, cross_check: bool = False) -> bool:
        """
        Pertinência estrita com margem ``mesh``.

        Raises:
            OracleDisagreementError: Teste do cone dual discorda fora da banda
        """
        xs, ts = p.x[None, :], np.array([p.t])
        inside = bool(self.contains_array(xs, ts)[0])
        if cross_check:
            dual = bool(self.dual_cone_array(xs, ts)[0])
            exact = bool(self.contains_array(xs, ts, margin=0.0)[0])
            if dual != exact:
                slack = float(min(abs(p.t - self.f_minus(xs)[0]), abs(self.f_plus(xs)[0] - p.t)))
                if slack > self.mesh:
                    raise OracleDisagreementError(tuple(p.x) + (p.t,), slack)
        return inside

    def component_array(self, xs: np.ndarray) -> List[Component]:
        heights = np.atleast_2d(xs) @ self.hemisphere_axis
        band = settings.numerics.boundary_band
        return [
            Component.BOUNDARY_EIN if abs(h) <= band else (Component.E1 if h > 0.0 else Component.E2)
            for h in heights
        ]

    def component_of(self, p: UniversalPoint) -> Component:
        """
        Raises:
            ValueError: Ponto fora de Ω
        """
        if not self.contains(p):
            raise ValueError("Ponto fora do domínio invisível")
        return self.component_array(p.x[None, :])[0]

    # ------------------------------------------------------------------
    # Gráficos Λ± e fronteira Λ⁺ ∖ Λ
    # ------------------------------------------------------------------

    def lambda_pm_graph(self, side: Side, grid: np.ndarray) -> AchronalGraph:
        """Gráfico de g± = f±|S^{n−1} sobre a grade equatorial."""
        grid = np.atleast_2d(grid)
        return AchronalGraph(grid, self.envelope(side, embed_equator(grid)))

    def distance_to_lambda(self, xs: np.ndarray) -> np.ndarray:
        """d₀ de cada ponto de S^n a Λ₀."""
        xs = np.atleast_2d(xs)
        values = np.empty(xs.shape[0])
        for block in iter_chunks(xs.shape[0]):
            values[block] = np.min(sphere_distance_matrix(xs[block], self.lambda_xs), axis=1)
        return values

    def boundary_sample(self, side: Side, grid: Optional[np.ndarray] = None) -> CompactSample:
        """
        Pontos de Λ± ∖ Λ: amostras do gráfico a mais de 2·mesh de Λ₀.

        Raises:
            EmptyBoundaryError: Λ cobre a esfera na resolução da malha
        """
        grid = boundary_grid(self.n) if grid is None else np.atleast_2d(grid)
        graph = self.lambda_pm_graph(side, grid)
        embedded = embed_equator(graph.domain_points)
        far = self.distance_to_lambda(embedded) > 2.0 * self.mesh
        if not np.any(far):
            raise EmptyBoundaryError("Λ± ∖ Λ vazio: Λ é uma esfera amostrada")
        return CompactSample(embedded[far], graph.values[far], self.mesh)

    def horizon_heights(self, side: Side, xs: np.ndarray, boundary: CompactSample) -> np.ndarray:
        """
        Altura da fronteira do passado (PLUS) ou do futuro (MINUS) de Λ± ∖ Λ.
        """
        if side is Side.PLUS:
            return past_envelope(boundary, xs)
        return future_envelope(boundary, xs)

    def horizon_surface(self, side: Side, xs: np.ndarray, grid: Optional[np.ndarray] = None) -> np.ndarray:
        """
        Alturas do horizonte futuro (PLUS) ou passado (MINUS) sobre pontos de S^n;
        NaN onde o horizonte não passa por Ω.
        """
        xs = np.atleast_2d(xs)
        heights = self.horizon_heights(side, xs, self.boundary_sample(side, grid))
        valid = (heights > self.f_minus(xs)) & (heights < self.f_plus(xs))
        return np.where(valid, heights, np.nan)

    # ------------------------------------------------------------------
    # Regiões
    # ------------------------------------------------------------------

    def _region_labels(
        self,
        xs: np.ndarray,
        ts: np.ndarray,
        band: float,
        future_boundary: Optional[CompactSample],
        past_boundary: Optional[CompactSample]
    ) -> Tuple[List[RegionLabel], List[Optional[RegionLabel]], np.ndarray, np.ndarray]:
        inside = self.contains_array(xs, ts)
        components = self.component_array(xs)
        count = ts.shape[0]

        if future_boundary is not None:
            future_slack = self.horizon_heights(Side.PLUS, xs, future_boundary) - ts
        else:
            future_slack = np.full(count, -np.inf)
        if past_boundary is not None:
            past_slack = ts - self.horizon_heights(Side.MINUS, xs, past_boundary)
        else:
            past_slack = np.full(count, -np.inf)

        labels: List[RegionLabel] = []
        past_labels: List[Optional[RegionLabel]] = []
        for i in range(count):
            if not inside[i]:
                labels.append(RegionLabel.OUTSIDE_OMEGA)
                past_labels.append(None)
                continue
            if components[i] is Component.BOUNDARY_EIN:
                labels.append(RegionLabel.CONFORMAL_BOUNDARY)
                past_labels.append(None)
                continue
            s_future, s_past = future_slack[i], past_slack[i]
            if s_future > band:
                labels.append(RegionLabel.PAST_OF_BOUNDARY)
            elif s_future >= -band:
                labels.append(RegionLabel.FUTURE_HORIZON)
            else:
                labels.append(RegionLabel.FUTURE_CORE)
            if s_past > band:
                past_labels.append(RegionLabel.FUTURE_OF_BOUNDARY)
            elif s_past >= -band:
                past_labels.append(RegionLabel.PAST_HORIZON)
            else:
                past_labels.append(RegionLabel.PAST_CORE)
        return labels, past_labels, future_slack, past_slack

    def classify_region(self, p: UniversalPoint, horizon_band: Optional[float] = None) -> RegionClassification:
        """
        Rótulo da região de p (lado futuro) e rótulo do lado passado.

        Args:
            p: Ponto de S^n × ℝ
            horizon_band: Largura da banda de horizonte (padrão 2·mesh)

        Raises:
            EmptyBoundaryError: Λ⁺ ∖ Λ vazio
        """
        band = default_horizon_band(self.mesh) if horizon_band is None else horizon_band
        xs, ts = p.x[None, :], np.array([p.t])
        if not self.contains_array(xs, ts)[0]:
            return RegionClassification(RegionLabel.OUTSIDE_OMEGA)
        if self.component_array(xs)[0] is Component.BOUNDARY_EIN:
            return RegionClassification(RegionLabel.CONFORMAL_BOUNDARY)

        future_boundary = self.boundary_sample(Side.PLUS)
        past_boundary = self.boundary_sample(Side.MINUS)
        labels, past_labels, future_slack, past_slack = self._region_labels(
            xs, ts, band, future_boundary, past_boundary
        )
        return RegionClassification(labels[0], past_labels[0], float(future_slack[0]), float(past_slack[0]))

    def classify_grid(self, xs: np.ndarray, ts: np.ndarray, horizon_band: Optional[float] = None) -> RegionGrid:
        """
        Rótulos para uma grade de pontos; com Λ⁺ ∖ Λ vazio todo ponto de Ω é núcleo.
        """
        band = default_horizon_band(self.mesh) if horizon_band is None else horizon_band
        xs = np.atleast_2d(xs)
        ts = np.asarray(ts, dtype=float).reshape(-1)
        try:
            future_boundary = self.boundary_sample(Side.PLUS)
            past_boundary = self.boundary_sample(Side.MINUS)
            empty = False
        except EmptyBoundaryError:
            future_boundary = past_boundary = None
            empty = True
            logger.info("Fronteira conforme vazia; apenas rótulos de núcleo")

        labels, past_labels, _, _ = self._region_labels(xs, ts, band, future_boundary, past_boundary)
        return RegionGrid(labels, past_labels, empty)

    # ------------------------------------------------------------------
    # Sondas
    # ------------------------------------------------------------------

    def random_probes(
        self,
        rng: np.random.Generator,
        count: int,
        component: Optional[Component] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Pontos uniformes em S^n × janela de tempo (opcionalmente num hemisfério)."""
        xs = rng.standard_normal((count, self.n + 1))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        if component is Component.E1:
            xs[:, -1] = np.abs(xs[:, -1])
        elif component is Component.E2:
            xs[:, -1] = -np.abs(xs[:, -1])
        low, high = self.time_window()
        ts = rng.uniform(low, high, count)
        return xs, ts
