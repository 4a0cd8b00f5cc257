"""
Espaço das geodésicas causais: 2-planos de ℝ^{2,n} em que a forma é
semi-definida negativa.

Métrica δ por ângulos principais, fibras F_q, sonda de expansão,
correspondência fóton ↔ fibrado tangente unitário e interseção com Ω.
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from ..config.settings import settings
from ..utils.logger import get_logger
from .core_forms import FormBasis, gram_matrix, signature_of_frame
from .einstein_models import extend_matrix, klein_to_conformal_array
from .errors import DegenerateSampleError, GeodesicMeetsLimitSetError
from .groups import GroupElement, ProjectivePoint, canonicalize_rows
from .invisible_domain import InvisibleDomain
from .limit_sets import LimitSetSample

logger = get_logger(__name__)

PointLike = Union[ProjectivePoint, np.ndarray]


class GeodesicClass(Enum):
    TIMELIKE_ADS = "TimelikeAdS"
    LIGHTLIKE_ADS = "LightlikeAdS"
    LIGHTLIKE_EIN = "LightlikeEin"
    NOT_CAUSAL = "NotCausal"


_SIGNATURE_TO_CLASS = {
    (2, 0, 0): GeodesicClass.TIMELIKE_ADS,
    (1, 0, 1): GeodesicClass.LIGHTLIKE_ADS,
    (0, 0, 2): GeodesicClass.LIGHTLIKE_EIN,
}


def canonical_frame(vectors: np.ndarray) -> np.ndarray:
    """
    Referencial canônico do span de dois vetores independentes.

    f₁ = Πe_{i₁}/‖Πe_{i₁}‖ com i₁ o maior ‖Πeᵢ‖ (Π o projetor ortogonal);
    f₂ é o resíduo normalizado de Πe_{i₂} ortogonal a f₁, com i₂ maximizando
    esse resíduo. Empates favorecem o menor índice.
    """
    q, _ = np.linalg.qr(np.asarray(vectors, dtype=float).T)
    projector = q @ q.T
    columns = projector.T

    norms = np.linalg.norm(columns, axis=1)
    first = int(np.flatnonzero(norms >= norms.max() * (1.0 - 1e-9))[0])
    f1 = columns[first] / norms[first]

    residuals = columns - np.outer(columns @ f1, f1)
    residual_norms = np.linalg.norm(residuals, axis=1)
    second = int(np.flatnonzero(residual_norms >= residual_norms.max() * (1.0 - 1e-9))[0])
    f2 = residuals[second] / residual_norms[second]
    f2 = f2 - (f2 @ f1) * f1
    return np.vstack([f1, f2 / np.linalg.norm(f2)])


@dataclass(frozen=True)
class Plane2:
    """2-plano com referencial euclidiano ortonormal canônico (linhas)."""
    frame: np.ndarray

    def __post_init__(self):
        frame = np.atleast_2d(np.asarray(self.frame, dtype=float))
        if frame.shape[0] != 2:
            raise ValueError(f"Plane2 exige 2 vetores, recebeu {frame.shape[0]}")
        singular_values = np.linalg.svd(frame, compute_uv=False)
        if singular_values[-1] <= settings.numerics.degeneracy_tolerance * singular_values[0]:
            raise ValueError("Vetores dependentes não geram um 2-plano")
        frame = canonical_frame(frame)
        frame.setflags(write=False)
        object.__setattr__(self, 'frame', frame)

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def gram(self) -> np.ndarray:
        return self.frame @ gram_matrix(FormBasis.DIAGONAL, self.dim) @ self.frame.T

    def projective_circle(self, samples: int) -> np.ndarray:
        angles = np.pi * np.arange(samples) / samples
        return np.outer(np.cos(angles), self.frame[0]) + np.outer(np.sin(angles), self.frame[1])


def plane_from_vectors(u: np.ndarray, v: np.ndarray) -> Plane2:
    return Plane2(np.vstack([u, v]))


def act_plane(g: Union[GroupElement, np.ndarray], plane: Plane2) -> Plane2:
    """g·P reortonormalizado (g estendido trivialmente se necessário)."""
    matrix = g.diagonal if isinstance(g, GroupElement) else np.asarray(g, dtype=float)
    matrix = extend_matrix(matrix, plane.dim)
    return Plane2(plane.frame @ matrix.T)


def classify(plane: Plane2) -> GeodesicClass:
    """Classe pela assinatura restrita (banda de degenerescência)."""
    signature = signature_of_frame(plane.frame, FormBasis.DIAGONAL)
    return _SIGNATURE_TO_CLASS.get(signature.as_tuple(), GeodesicClass.NOT_CAUSAL)


def delta_metric(first: Plane2, second: Plane2) -> float:
    """
    Maior ângulo principal entre os planos (= distância de Hausdorff entre as
    retas projetivas).
    """
    overlap = first.frame @ second.frame.T
    cosine = np.linalg.svd(overlap, compute_uv=False)[-1]
    residual = second.frame - overlap.T @ first.frame
    sine = np.linalg.norm(residual, ord=2)
    return float(np.arctan2(sine, cosine))


def _unit(point: PointLike) -> np.ndarray:
    if isinstance(point, ProjectivePoint):
        return point.in_basis(FormBasis.DIAGONAL).representative
    vector = np.asarray(point, dtype=float)
    return vector / np.linalg.norm(vector, axis=-1, keepdims=True)


def fiber_distances(plane: Plane2, points: np.ndarray) -> np.ndarray:
    """d(q, ℙ(P)) para cada linha unitária q (em lote)."""
    points = np.atleast_2d(points)
    if points.shape[1] < plane.dim:
        points = np.column_stack([points, np.zeros((points.shape[0], plane.dim - points.shape[1]))])
    coefficients = points @ plane.frame.T
    residual = points - coefficients @ plane.frame
    return np.arctan2(np.linalg.norm(residual, axis=1), np.linalg.norm(coefficients, axis=1))


def fiber_distance(plane: Plane2, q: PointLike) -> float:
    """δ(P, F_q) = ângulo entre a reta q e o plano P."""
    return float(fiber_distances(plane, _unit(q)[None, :])[0])


def delta_to_planes_through(plane: Plane2, q: PointLike, directions: np.ndarray) -> np.ndarray:
    """δ(P, span{q, w}) para cada linha w de ``directions`` (em lote)."""
    q = _unit(q)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    normals = directions - np.outer(directions @ q, q)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    frames = np.stack([np.broadcast_to(q, normals.shape), normals], axis=1)
    overlap = frames @ plane.frame.T
    cosine = np.linalg.svd(overlap, compute_uv=False)[:, -1]
    residual = frames - overlap @ plane.frame
    sine = np.linalg.norm(residual, ord=2, axis=(1, 2))
    return np.arctan2(sine, cosine)


def hausdorff_oracle(first: Plane2, second: Plane2, samples: int = 10_000) -> float:
    """Hausdorff por amostragem densa dos dois círculos projetivos."""
    def one_sided(source: Plane2, target: Plane2) -> float:
        target_points = canonicalize_rows(target.projective_circle(samples))
        tree = cKDTree(target_points)
        queries = canonicalize_rows(source.projective_circle(samples))
        chord = np.minimum(tree.query(queries)[0], tree.query(-queries)[0])
        return float(np.max(2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))))

    return max(one_sided(first, second), one_sided(second, first))


def avoids_limit_set(plane: Plane2, sample: LimitSetSample, clearance: Optional[float] = None) -> bool:
    """
    Certificado de pertinência a U: min_λ δ(P, F_λ) > clearance.

    Raises:
        ValueError: Plano não causal
    """
    clearance = settings.domain.clearance if clearance is None else clearance
    if classify(plane) is GeodesicClass.NOT_CAUSAL:
        raise ValueError("Plano não causal")
    return bool(np.min(fiber_distances(plane, sample.representatives)) > clearance)


# ----------------------------------------------------------------------------
# Sonda de expansão
# ----------------------------------------------------------------------------

class ExpansionProbeResult(NamedTuple):
    c_est: float
    witness_plane: Plane2
    witness_point: np.ndarray
    witness_index: int
    valid_samples: int


def _orthogonal_unit(rng: np.random.Generator, vectors: np.ndarray, dim: int) -> np.ndarray:
    candidate = rng.standard_normal(dim)
    basis, _ = np.linalg.qr(np.atleast_2d(vectors).T)
    candidate -= basis @ (basis.T @ candidate)
    return candidate / np.linalg.norm(candidate)


def expansion_probe(
    g: GroupElement,
    p: PointLike,
    radius: float,
    trials: int,
    seed: Optional[int] = None
) -> ExpansionProbeResult:
    """
    c_est = min δ(P, F_q) / δ(g·P, g·F_q) sobre pares (P, q) em W_p.

    Numerador antes da ação, denominador depois: c_est > 1 quer dizer que g
    contrai δ perto de p (g⁻¹ expande).

    q é sorteado a distância < radius/2 de p e P passa a distância
    β ∈ [1e-4, 1e-2] de q.

    Raises:
        DegenerateSampleError: Nenhuma razão definida (δ(P, F_q) < 1e-12)
    """
    rng = np.random.default_rng(settings.sampling.seed if seed is None else seed)
    matrix = g.diagonal
    dim = matrix.shape[0]
    center = _unit(p)

    best_ratio, best = np.inf, None
    valid = 0
    for index in range(trials):
        tangent = _orthogonal_unit(rng, center, dim)
        alpha = rng.uniform(0.0, radius / 2.0)
        q = np.cos(alpha) * center + np.sin(alpha) * tangent

        beta = rng.uniform(1e-4, 1e-2)
        w = _orthogonal_unit(rng, q, dim)
        x = np.cos(beta) * q + np.sin(beta) * w
        y = _orthogonal_unit(rng, x, dim)
        plane = plane_from_vectors(x, y)

        before = fiber_distance(plane, q)
        if before < 1e-12 or fiber_distance(plane, center) >= radius:
            continue
        after = fiber_distance(act_plane(matrix, plane), matrix @ q)
        if after <= 0.0:
            continue
        valid += 1
        ratio = before / after
        if ratio < best_ratio:
            best_ratio, best = ratio, (plane, q, index)

    if best is None:
        raise DegenerateSampleError(f"Nenhuma razão definida em {trials} amostras")

    logger.debug("Sonda de expansão", c_est=float(best_ratio), valid=valid, trials=trials)
    return ExpansionProbeResult(float(best_ratio), best[0], canonicalize_rows(best[1]), best[2], valid)


# ----------------------------------------------------------------------------
# Fótons ↔ T¹S^n
# ----------------------------------------------------------------------------

def photon_tangent(plane: Plane2) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fóton totalmente isotrópico ↦ (x(0), x′(0)) ∈ T¹S^{d−1}.

    O plano é span{(1, 0, x₀), (0, 1, v)}; a curva é (cos t·x₀ + sen t·v, t).
    """
    f1, f2 = plane.frame
    slice_zero = f1[1] * f2 - f2[1] * f1
    slice_zero = slice_zero / slice_zero[0]
    slice_quarter = f1[0] * f2 - f2[0] * f1
    slice_quarter = slice_quarter / slice_quarter[1]
    return slice_zero[2:], slice_quarter[2:]


def photon_plane(x: np.ndarray, v: np.ndarray) -> Plane2:
    """Inverso de photon_tangent."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    return plane_from_vectors(np.concatenate([[1.0, 0.0], x]), np.concatenate([[0.0, 1.0], v]))


def photon_curve(x: np.ndarray, v: np.ndarray, ts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    ts = np.asarray(ts, dtype=float)
    return np.outer(np.cos(ts), x) + np.outer(np.sin(ts), v), ts


# ----------------------------------------------------------------------------
# Interseção com Ω
# ----------------------------------------------------------------------------

class IntersectionResult(NamedTuple):
    hits: bool
    arc: Optional[Tuple[float, float]]
    runs: int
    connected: bool


def _runs(mask: np.ndarray) -> list:
    """Intervalos [início, fim] de True consecutivos."""
    padded = np.concatenate([[False], mask, [False]]).astype(int)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return list(zip(starts, ends))


def _photon_pieces(domain: InvisibleDomain, x0: np.ndarray, v: np.ndarray) -> list:
    """
    Trechos exatos de t em que o fóton (cos t·x₀ + sen t·v, t) está em Ω.

    Na janela de tempo, |t − t_j| < d(x(t), x_j) ⇔ cos(t − t_j) > ⟨x(t), x_j⟩,
    ou seja (cos t, sen t)·c_j > 0 com c_j = (cos t_j − ⟨x₀, x_j⟩,
    sen t_j − ⟨v, x_j⟩). A interseção dos semicírculos é um arco de
    comprimento π − (abertura dos ângulos de c_j).
    """
    xs, ts = domain.lambda_xs, domain.lambda_ts
    normals = np.column_stack([np.cos(ts) - xs @ x0, np.sin(ts) - xs @ v])
    if np.any(np.linalg.norm(normals, axis=1) <= settings.numerics.degeneracy_tolerance):
        return []

    angles = np.sort(np.mod(np.arctan2(normals[:, 1], normals[:, 0]), 2.0 * np.pi))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
    widest = int(np.argmax(gaps))
    spread = 2.0 * np.pi - gaps[widest]
    if spread >= np.pi:
        return []
    first = angles[(widest + 1) % len(angles)]
    low, high = first + spread - np.pi / 2.0, first + np.pi / 2.0

    window_low, window_high = domain.time_window()
    pieces = []
    k_min = int(np.floor((window_low - high) / (2.0 * np.pi)))
    k_max = int(np.ceil((window_high - low) / (2.0 * np.pi)))
    for k in range(k_min, k_max + 1):
        start = max(low + 2.0 * np.pi * k, window_low)
        end = min(high + 2.0 * np.pi * k, window_high)
        if end - start > settings.numerics.boundary_band:
            pieces.append((float(start), float(end)))
    return pieces


def _form_orthonormal(plane: Plane2) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Autovalores e vetores do plano diagonalizando a Gram restrita."""
    eigenvalues, eigenvectors = np.linalg.eigh(plane.gram())
    return eigenvalues, eigenvectors.T @ plane.frame, eigenvectors


def _timelike_curve(plane: Plane2, window: Tuple[float, float], samples: int) -> Tuple[np.ndarray, np.ndarray]:
    eigenvalues, vectors, _ = _form_orthonormal(plane)
    e = vectors[0] / np.sqrt(-eigenvalues[0])
    f = vectors[1] / np.sqrt(-eigenvalues[1])
    s = 2.0 * np.pi * np.arange(samples) / samples
    curve = np.outer(np.cos(s), e) + np.outer(np.sin(s), f)
    lifted = np.column_stack([curve, np.ones(samples)])
    xs, thetas = klein_to_conformal_array(lifted)
    thetas = np.unwrap(thetas)
    if thetas[-1] < thetas[0]:
        xs, thetas = xs[::-1], thetas[::-1]
    low, high = window
    base = thetas[0]
    k_min = int(np.floor((low - base) / (2.0 * np.pi))) - 1
    k_max = int(np.ceil((high - base) / (2.0 * np.pi))) + 1
    copies_x, copies_t = [], []
    for k in range(k_min, k_max + 1):
        shifted = thetas + 2.0 * np.pi * k
        keep = (shifted > low) & (shifted < high)
        copies_x.append(xs[keep])
        copies_t.append(shifted[keep])
    all_t = np.concatenate(copies_t)
    order = np.argsort(all_t)
    return np.concatenate(copies_x)[order], all_t[order]


def _lightlike_ads_photon(plane: Plane2) -> Tuple[np.ndarray, np.ndarray]:
    eigenvalues, vectors, _ = _form_orthonormal(plane)
    e = vectors[0] / np.sqrt(-eigenvalues[0])
    null = vectors[1]
    return photon_tangent(plane_from_vectors(np.append(e, 1.0), np.append(null, 0.0)))


def intersect_domain(
    plane: Plane2,
    domain: InvisibleDomain,
    samples: Optional[int] = None,
    clearance: Optional[float] = None
) -> IntersectionResult:
    """
    Mede φ ∩ Ω na parametrização universal.

    Aceita fótons de Ein_{1,n} (dimensão n+3) e planos TimelikeAdS,
    LightlikeAdS e LightlikeEin de ℝ^{2,n} (geodésicas de AdS na cópia
    superior, fótons da fronteira no equador). Fótons de Ein são resolvidos
    em forma fechada; as geodésicas de AdS são amostradas com ``samples``
    pontos.

    Raises:
        GeodesicMeetsLimitSetError: Geodésica não evita Λ
        ValueError: Plano não causal ou de dimensão incompatível
    """
    samples = settings.domain.geodesic_samples if samples is None else samples
    geodesic_class = classify(plane)
    if geodesic_class is GeodesicClass.NOT_CAUSAL:
        raise ValueError("Plano não causal")
    if not avoids_limit_set(plane, domain.sample, clearance):
        raise GeodesicMeetsLimitSetError("Geodésica encontra o conjunto limite amostrado")

    window = domain.time_window()
    ambient = domain.n + 3
    upper_only = False

    if plane.dim == ambient:
        if geodesic_class is not GeodesicClass.LIGHTLIKE_EIN:
            raise ValueError("Em ℝ^{2,n+1} apenas fótons são suportados")
        x0, v = photon_tangent(plane)
    elif plane.dim == ambient - 1:
        if geodesic_class is GeodesicClass.TIMELIKE_ADS:
            x0 = v = None
        elif geodesic_class is GeodesicClass.LIGHTLIKE_ADS:
            x0, v = _lightlike_ads_photon(plane)
            upper_only = True
        else:
            x0, v = photon_tangent(plane)
            x0, v = np.append(x0, 0.0), np.append(v, 0.0)
    else:
        raise ValueError(f"Plano de dimensão {plane.dim} incompatível com n={domain.n}")

    if x0 is not None and not upper_only:
        pieces = _photon_pieces(domain, x0, v)
        if not pieces:
            return IntersectionResult(False, None, 0, True)
        longest = max(pieces, key=lambda piece: piece[1] - piece[0])
        return IntersectionResult(True, longest, len(pieces), len(pieces) == 1)

    if x0 is None:
        xs, ts = _timelike_curve(plane, window, samples)
    else:
        ts = np.linspace(window[0], window[1], samples + 2)[1:-1]
        xs, ts = photon_curve(x0, v, ts)
        if upper_only:
            keep = xs[:, -1] > 0.0
            xs, ts = xs[keep], ts[keep]

    if ts.size == 0:
        return IntersectionResult(False, None, 0, True)

    inside = domain.contains_array(xs, ts, margin=0.0)
    runs = _runs(inside)
    if not runs:
        return IntersectionResult(False, None, 0, True)

    longest = max(runs, key=lambda r: r[1] - r[0])
    arc = (float(ts[longest[0]]), float(ts[longest[1]]))
    connected = len(runs) == 1
    if len(runs) == 2:
        loose = domain.contains_array(xs, ts, margin=-domain.mesh)
        connected = len(_runs(loose)) == 1
    return IntersectionResult(True, arc, len(runs), connected)
