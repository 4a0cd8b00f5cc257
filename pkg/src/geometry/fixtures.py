"""
Exemplos embutidos com dados analíticos de referência e as verificações
correspondentes (diamantes fuchsianos, junção de esferas e propriedade
da ação do grupo de Schottky).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..config.settings import settings
from ..utils.logger import get_logger
from .causality import causal_classify_array, iter_chunks, sphere_distance, sphere_distance_matrix
from .einstein_models import act_universal_array
from .errors import EmptyBoundaryError, PingPongFailureError
from .groups import boost_element, validate
from .invisible_domain import InvisibleDomain, Side, boundary_grid, embed_equator
from .limit_sets import (
    GroupPresentation,
    LimitSetSample,
    RelationHint,
    approximate_limit_set,
    enumerate_word_arrays,
    sample_from_universal,
)

logger = get_logger(__name__)


class FixtureName(Enum):
    CYCLIC_PROXIMAL = "cyclic"
    SCHOTTKY = "schottky"
    FUCHSIAN_SPHERE = "fuchsian"
    JOIN_SPHERES = "join"


@dataclass(frozen=True)
class Fixture:
    name: FixtureName
    n: int
    mesh: float
    sample: LimitSetSample
    presentation: Optional[GroupPresentation] = None
    params: Dict[str, Any] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)

    def domain(self) -> InvisibleDomain:
        return InvisibleDomain.build(self.sample, self.mesh)


# ----------------------------------------------------------------------------
# Construções
# ----------------------------------------------------------------------------

def _rotation_xy(angle: float) -> np.ndarray:
    """Rotação do plano (x₁, x₂) em ℝ^{2,2}."""
    rotation = np.eye(4)
    c, s = np.cos(angle), np.sin(angle)
    rotation[2:, 2:] = [[c, -s], [s, c]]
    return rotation


def schottky_generators(separation: float) -> GroupPresentation:
    """
    Dois boosts de rapidez ``separation`` em O(1,2) ⊂ O(2,2), com eixos nas
    direções 0 e π/2 do círculo do bordo; v fica fixo.
    """
    a = boost_element(separation, 0.0, 2).diagonal
    rotation = _rotation_xy(np.pi / 2.0)
    b = rotation @ a @ rotation.T
    return GroupPresentation((validate(a), validate(b)), RelationHint.FREE)


def ping_pong_radius(separation: float) -> float:
    """Meia largura mínima dos arcos de ping-pong: 2·atan(e^{−ℓ/2})."""
    return 2.0 * float(np.arctan(np.exp(-separation / 2.0)))


def verify_ping_pong(presentation: GroupPresentation, radius: float, samples: int = 720) -> None:
    """
    Cada letra leva o complemento do arco repulsor para dentro do arco atrator.

    Raises:
        PingPongFailureError: Arcos se sobrepõem ou a inclusão falha
    """
    if radius >= np.pi / 4.0:
        raise PingPongFailureError(f"Arcos de meia largura {radius:.4f} ≥ π/4 se sobrepõem")

    centers = {'a': 0.0, 'A': np.pi, 'b': np.pi / 2.0, 'B': 3.0 * np.pi / 2.0}
    repelling = {'a': 'A', 'A': 'a', 'b': 'B', 'B': 'b'}
    angles = 2.0 * np.pi * np.arange(samples) / samples

    for letter, matrix in zip(presentation.letters(), presentation.letter_matrices()):
        source_center = centers[repelling[letter]]
        offset = np.angle(np.exp(1j * (angles - source_center)))
        domain = angles[np.abs(offset) >= radius]
        points = np.column_stack([np.ones_like(domain), np.zeros_like(domain), np.cos(domain), np.sin(domain)])
        images = points @ matrix.T
        image_angles = np.arctan2(images[:, 3], images[:, 2])
        distance = np.abs(np.angle(np.exp(1j * (image_angles - centers[letter]))))
        if np.max(distance) > radius + 1e-9:
            raise PingPongFailureError(
                f"Letra {letter}: imagem a {np.max(distance):.4f} do centro (raio {radius:.4f})"
            )


def fuchsian_sample(n: int, count: int) -> LimitSetSample:
    xs = boundary_grid(n, count)
    return sample_from_universal(xs, np.zeros(count))


def sample_mesh(xs: np.ndarray) -> float:
    """Maior distância ao vizinho mais próximo (cobertura da amostra)."""
    tree = cKDTree(xs)
    chord = tree.query(xs, k=2)[0][:, 1]
    return float(np.max(2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))))


def join_sample(n: int, p: int, count: int) -> LimitSetSample:
    """S^p nas primeiras p+1 coordenadas de S^{n−1}, com f ≡ 0."""
    if p == 0:
        xs = np.zeros((2, n))
        xs[0, 0], xs[1, 0] = 1.0, -1.0
    else:
        xs = np.zeros((count, n))
        xs[:, :p + 1] = boundary_grid(p + 1, count)
    return sample_from_universal(xs, np.zeros(xs.shape[0]))


def build_fixture(name: FixtureName, n: Optional[int] = None, **params) -> Fixture:
    """
    Constrói um exemplo.

    Args:
        name: Nome do exemplo
        n: Dimensão (Schottky exige n = 2)
        **params: lam, mu (cíclico); separation, max_len (Schottky);
            count (fuchsiano); p, count (junção); mesh

    Raises:
        PingPongFailureError: Discos de ping-pong se sobrepõem
    """
    n = settings.sampling.default_n if n is None else n

    if name is FixtureName.CYCLIC_PROXIMAL:
        lam, mu = params.get('lam', 3.0), params.get('mu', 1.0)
        presentation = GroupPresentation((boost_element(lam, mu, n),))
        sample = approximate_limit_set(presentation, params.get('max_len', 8))
        mesh = params.get('mesh', settings.domain.mesh)
        return Fixture(name, n, mesh, sample, presentation, {'lam': lam, 'mu': mu}, {'limit_points': 2})

    if name is FixtureName.SCHOTTKY:
        if n != 2:
            raise ValueError("Exemplo de Schottky definido para n = 2")
        separation = params.get('separation', 2.0)
        presentation = schottky_generators(separation)
        radius = ping_pong_radius(separation)
        verify_ping_pong(presentation, radius)
        max_len = params.get('max_len', 6)
        sample = approximate_limit_set(presentation, max_len)
        mesh = params.get('mesh', settings.domain.mesh)
        logger.info("Exemplo de Schottky construído", points=len(sample), separation=separation)
        return Fixture(
            name, n, mesh, sample, presentation,
            {'separation': separation, 'max_len': max_len},
            {'ping_pong_radius': radius}
        )

    if name is FixtureName.FUCHSIAN_SPHERE:
        count = params.get('count', 512 if n == 2 else 4096)
        sample = fuchsian_sample(n, count)
        mesh = params.get('mesh', 2.0 * np.pi / count if n == 2 else sample_mesh(sample.lift_xs))
        return Fixture(name, n, mesh, sample, None, {'count': count}, {'f_plus_pole': np.pi / 2.0})

    if name is FixtureName.JOIN_SPHERES:
        p = params.get('p', 0)
        if not 0 <= p <= n - 2:
            raise ValueError(f"p deve estar em [0, {n - 2}]")
        count = params.get('count', 512)
        sample = join_sample(n, p, count)
        default_mesh = settings.domain.mesh if p == 0 else max(settings.domain.mesh, 2.0 * np.pi / count)
        mesh = params.get('mesh', default_mesh)
        return Fixture(name, n, mesh, sample, None, {'p': p, 'q': n - 2 - p, 'count': count}, {'s_q_value': np.pi / 2.0})

    raise ValueError(f"Exemplo desconhecido: {name}")


# ----------------------------------------------------------------------------
# Verificações
# ----------------------------------------------------------------------------

def _sphere_poles(dim: int) -> np.ndarray:
    pole = np.zeros(dim)
    pole[-1] = 1.0
    return pole


def check_diamond(fixture: Fixture, grid_size: int = 10_000, probes: int = 10_000, seed: Optional[int] = None) -> Dict[str, Any]:
    """
    Ω de Λ = S^{n−1} × {0} é a união de dois diamantes I⁻(pᵢ⁺) ∩ I⁺(pᵢ⁻).
    """
    domain = fixture.domain()
    mesh = fixture.mesh
    bound = 2.0 * mesh
    grid = boundary_grid(fixture.n + 1, grid_size)
    pole = _sphere_poles(fixture.n + 1)

    to_equator = np.pi / 2.0 - sphere_distance(grid, np.where(grid[:, -1:] >= 0.0, pole, -pole))
    deviation = float(np.max(np.abs(domain.f_plus(grid) - to_equator)))

    rng = np.random.default_rng(settings.sampling.seed if seed is None else seed)
    xs, ts = domain.random_probes(rng, probes)
    analytic_slack = np.pi / 2.0 - sphere_distance(xs, np.where(xs[:, -1:] >= 0.0, pole, -pole)) - np.abs(ts)
    in_diamond = analytic_slack > 0.0
    computed = domain.contains_array(xs, ts)
    outside_band = np.abs(analytic_slack) > bound
    agreement = float(np.mean(in_diamond[outside_band] == computed[outside_band])) if np.any(outside_band) else 1.0

    try:
        domain.boundary_sample(Side.PLUS)
        boundary_empty = False
    except EmptyBoundaryError:
        boundary_empty = True

    passed = deviation <= bound and agreement == 1.0 and boundary_empty
    return {
        'fixture': fixture.name.value,
        'n': fixture.n,
        'mesh': mesh,
        'bound': bound,
        'max_deviation': deviation,
        'membership_agreement': agreement,
        'probes_checked': int(np.sum(outside_band)),
        'boundary_empty': boundary_empty,
        'passed': bool(passed)
    }


def _unrelated_slack(xs: np.ndarray, ts: np.ndarray, sample_xs: np.ndarray, sample_ts: np.ndarray) -> np.ndarray:
    """min_j (d₀(x, xⱼ) − |t − tⱼ|) por ponto."""
    values = np.empty(ts.shape[0])
    for block in iter_chunks(ts.shape[0]):
        distances = sphere_distance_matrix(xs[block], sample_xs)
        values[block] = np.min(distances - np.abs(ts[block, None] - sample_ts[None, :]), axis=1)
    return values


def _dual_cone_slack(xs: np.ndarray, ts: np.ndarray, sample_xs: np.ndarray, sample_ts: np.ndarray) -> np.ndarray:
    """max_j (cos d₀ − cos Δt): negativo sse p está no cone dual dos geradores."""
    values = np.empty(ts.shape[0])
    for block in iter_chunks(ts.shape[0]):
        distances = sphere_distance_matrix(xs[block], sample_xs)
        values[block] = np.max(np.cos(distances) - np.cos(ts[block, None] - sample_ts[None, :]), axis=1)
    return values


def check_join(fixture: Fixture, grid_size: int = 16_384, probes: int = 4000, seed: Optional[int] = None) -> Dict[str, Any]:
    """
    Λ⁺ é a junção de S^p × {0} e S^q × {π/2}; E(Λ⁺) coincide com o cone dual
    gerado por S^p ∪ S^q.
    """
    domain = fixture.domain()
    n, p = fixture.n, fixture.params['p']
    mesh = fixture.mesh
    bound = 2.0 * mesh

    grid = boundary_grid(n, grid_size)
    graph = domain.lambda_pm_graph(Side.PLUS, grid)
    analytic = np.arccos(np.clip(np.linalg.norm(grid[:, :p + 1], axis=1), 0.0, 1.0))
    join_deviation = float(np.max(np.abs(graph.values - analytic)))

    s_q = np.zeros((256, n))
    s_q[:, p + 1:] = boundary_grid(n - p - 1, 256) if n - p - 1 >= 2 else np.array([[1.0], [-1.0]] * 128)
    s_q_values = domain.lambda_pm_graph(Side.PLUS, s_q).values
    s_q_deviation = float(np.max(np.abs(s_q_values - np.pi / 2.0)))

    # E(Λ⁺) pelo gráfico amostrado contra o cone dual de S^p ∪ S^q
    rng = np.random.default_rng(settings.sampling.seed if seed is None else seed)
    xs = rng.standard_normal((probes, n + 1))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    ts = rng.uniform(-np.pi / 2.0, np.pi, probes)

    graph_xs = embed_equator(graph.domain_points)
    graph_slack = _unrelated_slack(xs, ts, graph_xs, graph.values)
    generators_xs = np.vstack([embed_equator(fixture.sample.lift_xs), embed_equator(s_q)])
    generators_ts = np.concatenate([fixture.sample.lift_ts, np.full(s_q.shape[0], np.pi / 2.0)])
    dual_slack = _dual_cone_slack(xs, ts, generators_xs, generators_ts)

    outside_band = (np.abs(graph_slack) > bound) & (np.abs(dual_slack) > bound)
    agreement = float(np.mean((graph_slack[outside_band] > 0.0) == (dual_slack[outside_band] < 0.0))) if np.any(outside_band) else 1.0

    passed = join_deviation <= bound and s_q_deviation <= bound and agreement == 1.0
    return {
        'fixture': fixture.name.value,
        'n': n,
        'p': p,
        'q': n - 2 - p,
        'mesh': mesh,
        'bound': bound,
        'join_deviation': join_deviation,
        's_q_deviation': s_q_deviation,
        'dual_cone_agreement': agreement,
        'probes_checked': int(np.sum(outside_band)),
        'passed': bool(passed)
    }


def properness_probe(
    fixture: Fixture,
    max_len: int = 8,
    probes: int = 100,
    radius: float = 0.1,
    seed: Optional[int] = None
) -> Dict[str, Any]:
    """
    Retornos de w·K a K por comprimento de palavra e acausalidade das órbitas.

    K é a bola de raio ``radius`` (em max(d₀, |Δt|)) em torno de (polo, 0).
    """
    if fixture.presentation is None:
        raise ValueError("Sonda de propriedade exige um grupo com matrizes")

    rng = np.random.default_rng(settings.sampling.seed if seed is None else seed)
    dim = fixture.n + 1
    pole = _sphere_poles(dim)
    offsets = rng.standard_normal((probes, dim))
    offsets -= np.outer(offsets @ pole, pole)
    offsets /= np.linalg.norm(offsets, axis=1, keepdims=True)
    angles = rng.uniform(0.0, radius, probes)
    xs = np.outer(np.cos(angles), pole) + np.sin(angles)[:, None] * offsets
    ts = rng.uniform(-radius, radius, probes)

    words, matrices = enumerate_word_arrays(fixture.presentation, max_len)
    lengths = np.array([len(w) for w in words], dtype=int)
    returns = np.zeros(len(words), dtype=bool)
    violations = 0

    for index, matrix in enumerate(matrices):
        image_xs, image_ts = act_universal_array(matrix, xs, ts, 0.0)
        in_ball = (sphere_distance(image_xs, pole) <= radius) & (np.abs(image_ts) <= radius)
        returns[index] = bool(np.any(in_ball))
        codes = causal_classify_array(image_xs, image_ts, xs, ts)
        violations += int(np.sum(codes != 0))

    cumulative = [1]
    for length in range(1, max_len + 1):
        cumulative.append(1 + int(np.sum(returns & (lengths <= length))))

    stabilized = len(cumulative) >= 3 and cumulative[-1] == cumulative[-2] == cumulative[-3]
    logger.debug("Sonda de propriedade", words=len(words), returns=cumulative[-1], violations=violations)
    return {
        'fixture': fixture.name.value,
        'max_len': max_len,
        'probes': probes,
        'radius': radius,
        'return_counts': cumulative,
        'stabilized': bool(stabilized),
        'acausality_violations': violations,
        'identity_returns': True,
        'passed': bool(stabilized and violations == 0)
    }
