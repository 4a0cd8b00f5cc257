"""
Enumeração de palavras em subgrupos finitamente gerados, aproximação do
conjunto limite por polos atratores, certificação de negatividade e
levantamento acausal para um domínio afim.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import breadth_first_order, minimum_spanning_tree
from scipy.spatial import cKDTree

from ..config.settings import settings
from ..utils.logger import get_logger
from .core_forms import FormBasis, form_inner, gram_matrix
from .causality import AcausalityMode, acausality_report
from .einstein_models import KleinPoint, SpaceKind, UniversalPoint, klein_to_conformal_array
from .errors import (
    EmptySampleError,
    InconsistentLiftError,
    WordBudgetExceededError,
)
from .groups import (
    GroupElement,
    attracting_points_batch,
    canonicalize_rows,
    form_residual,
    inverse,
    p1_data_batch,
)

logger = get_logger(__name__)

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class RelationHint(Enum):
    FREE = "free"
    UNKNOWN = "unknown"


def invert_word(word: str) -> str:
    """Inverso formal: ordem reversa com caixa trocada (A = a⁻¹)."""
    return word[::-1].swapcase()


@dataclass(frozen=True)
class GroupPresentation:
    """Geradores validados (base diagonal) com inversos em cache."""
    generators: Tuple[GroupElement, ...]
    relation_hint: RelationHint = RelationHint.FREE
    inverses: Tuple[GroupElement, ...] = field(default=(), compare=False)

    def __post_init__(self):
        generators = tuple(self.generators)
        if not generators:
            raise ValueError("Apresentação sem geradores")
        if len(generators) > len(LETTERS):
            raise ValueError(f"No máximo {len(LETTERS)} geradores")
        dims = {g.dim for g in generators}
        if len(dims) != 1:
            raise ValueError(f"Geradores com dimensões diferentes: {sorted(dims)}")

        inverses = tuple(inverse(g) for g in generators)
        for g, g_inv in zip(generators, inverses):
            defect = np.linalg.norm(g.diagonal @ g_inv.diagonal - np.eye(g.dim))
            if defect > settings.numerics.form_tolerance * max(1.0, np.linalg.norm(g.diagonal)) ** 2:
                raise ValueError(f"Inverso inconsistente (defeito {defect:.2e})")
        object.__setattr__(self, 'generators', generators)
        object.__setattr__(self, 'inverses', inverses)

    @property
    def dim(self) -> int:
        return self.generators[0].dim

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letters(self) -> List[str]:
        """Letras na ordem a, A, b, B, …"""
        out = []
        for i in range(self.rank):
            out.extend([LETTERS[i], LETTERS[i].upper()])
        return out

    def letter_matrices(self) -> np.ndarray:
        mats = []
        for g, g_inv in zip(self.generators, self.inverses):
            mats.extend([g.diagonal, g_inv.diagonal])
        return np.stack(mats)

    def word_matrix(self, word: str) -> np.ndarray:
        lookup = dict(zip(self.letters(), self.letter_matrices()))
        matrix = np.eye(self.dim)
        for letter in word:
            matrix = matrix @ lookup[letter]
        return matrix


def free_word_count(rank: int, max_len: int) -> int:
    """Número de palavras reduzidas não vazias de comprimento ≤ max_len."""
    return sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, max_len + 1))


def _normalized_flat(matrices: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrices, axis=(1, 2))
    return matrices.reshape(matrices.shape[0], -1) / np.maximum(1.0, norms)[:, None]


def enumerate_word_arrays(
    presentation: GroupPresentation,
    max_len: int,
    budget: Optional[int] = None
) -> Tuple[List[str], np.ndarray]:
    """
    Palavras reduzidas até ``max_len`` e suas matrizes (base diagonal), em BFS.

    Para relação Unknown, elementos cujas matrizes coincidem (tolerância
    relativa 1e-8) são identificados e só os sobreviventes são expandidos.

    Raises:
        WordBudgetExceededError: Contagem acima do orçamento
    """
    budget = settings.sampling.word_budget if budget is None else budget
    dim = presentation.dim
    if max_len < 1:
        return [], np.zeros((0, dim, dim))

    free = presentation.relation_hint is RelationHint.FREE
    if free:
        expected = free_word_count(presentation.rank, max_len)
        if expected > budget:
            raise WordBudgetExceededError(expected, budget)

    letters = presentation.letters()
    letter_mats = presentation.letter_matrices()
    inverse_of = [i ^ 1 for i in range(len(letters))]
    radius = settings.numerics.dedupe_matrix_radius

    seen = [_normalized_flat(np.eye(dim)[None])]
    level_words = list(letters)
    level_last = np.arange(len(letters))
    level_mats = letter_mats.copy()

    all_words: List[str] = []
    all_mats: List[np.ndarray] = []
    total = 0

    for length in range(1, max_len + 1):
        if length > 1:
            new_words, new_last, new_mats = [], [], []
            for m, letter in enumerate(letters):
                mask = level_last != inverse_of[m]
                if not np.any(mask):
                    continue
                idx = np.flatnonzero(mask)
                new_mats.append(level_mats[idx] @ letter_mats[m])
                new_words.extend(level_words[i] + letter for i in idx)
                new_last.append(np.full(idx.shape[0], m))
            # ordem canônica: por palavra
            order = np.argsort(np.array(new_words, dtype=object), kind='stable')
            level_words = [new_words[i] for i in order]
            level_last = np.concatenate(new_last)[order]
            level_mats = np.concatenate(new_mats)[order]

        if not free:
            flat = _normalized_flat(level_mats)
            known = cKDTree(np.vstack(seen))
            keep = np.ones(len(level_words), dtype=bool)
            hits = known.query_ball_point(flat, r=radius)
            for i, neighbours in enumerate(hits):
                if neighbours:
                    keep[i] = False
            level_tree = cKDTree(flat)
            for i, j in sorted(level_tree.query_pairs(r=radius)):
                if keep[i]:
                    keep[j] = False
            level_words = [w for w, k in zip(level_words, keep) if k]
            level_last = level_last[keep]
            level_mats = level_mats[keep]
            seen.append(flat[keep])

        total += len(level_words)
        if total > budget:
            raise WordBudgetExceededError(total, budget)
        all_words.extend(level_words)
        all_mats.append(level_mats)

        if not level_words:
            break

    logger.debug("Palavras enumeradas", count=total, max_len=max_len)
    return all_words, np.concatenate(all_mats) if all_mats else np.zeros((0, dim, dim))


def enumerate_words(
    presentation: GroupPresentation,
    max_len: int,
    budget: Optional[int] = None
) -> List[Tuple[str, GroupElement]]:
    """
    Lista (palavra, elemento) de todas as palavras reduzidas até ``max_len``.
    """
    words, mats = enumerate_word_arrays(presentation, max_len, budget)
    residuals = form_residual(mats) if len(words) else np.zeros(0)
    return [
        (word, GroupElement(matrix, FormBasis.DIAGONAL, float(res)))
        for word, matrix, res in zip(words, mats, residuals)
    ]


@dataclass(frozen=True)
class LimitSetSample:
    """Amostra de pontos nulos (representantes com sinal) do conjunto limite."""
    representatives: np.ndarray
    source_words: Tuple[str, ...]
    dedupe_radius: float
    gaps: Optional[np.ndarray] = None
    invariance_residual: Optional[float] = None
    lift_xs: Optional[np.ndarray] = None
    lift_ts: Optional[np.ndarray] = None

    def __post_init__(self):
        reps = np.atleast_2d(np.asarray(self.representatives, dtype=float))
        reps = reps / np.linalg.norm(reps, axis=1, keepdims=True)
        q_values = form_inner(reps, reps)
        if np.max(np.abs(q_values)) > settings.numerics.form_tolerance:
            raise ValueError(f"Pontos não nulos na amostra (|q| até {np.max(np.abs(q_values)):.2e})")
        object.__setattr__(self, 'representatives', reps)
        object.__setattr__(self, 'source_words', tuple(self.source_words))

    def __len__(self) -> int:
        return self.representatives.shape[0]

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    @property
    def has_lift(self) -> bool:
        return self.lift_xs is not None

    def points(self) -> List[KleinPoint]:
        return [KleinPoint(rep, SpaceKind.EIN) for rep in self.representatives]

    def universal_lift(self) -> Optional[List[UniversalPoint]]:
        if not self.has_lift:
            return None
        return [UniversalPoint(x, t) for x, t in zip(self.lift_xs, self.lift_ts)]


def _projective_tree(points: np.ndarray) -> cKDTree:
    return cKDTree(canonicalize_rows(points))


def _chord(radius: float) -> float:
    return 2.0 * np.sin(radius / 2.0)


def dedupe_projective(points: np.ndarray, radius: float) -> np.ndarray:
    """
    Índices mantidos por varredura gulosa na ordem dada: cada ponto mantido
    remove os posteriores a distância angular ≤ radius (classes ±).
    """
    unit = canonicalize_rows(points)
    tree = cKDTree(unit)
    chord = _chord(radius)
    removed = np.zeros(unit.shape[0], dtype=bool)
    kept = []
    for i in range(unit.shape[0]):
        if removed[i]:
            continue
        kept.append(i)
        for sign in (1.0, -1.0):
            for j in tree.query_ball_point(sign * unit[i], r=chord):
                if j > i:
                    removed[j] = True
    return np.array(kept, dtype=int)


def nearest_projective_distance(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distância angular de cada consulta ao ponto mais próximo da amostra."""
    tree = _projective_tree(points)
    unit = canonicalize_rows(queries)
    chord_plus, _ = tree.query(unit)
    chord_minus, _ = tree.query(-unit)
    chord = np.minimum(chord_plus, chord_minus)
    return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))


def invariance_residual(presentation: GroupPresentation, representatives: np.ndarray) -> float:
    """max_s max_λ d(s·λ, amostra) sobre geradores e inversos."""
    worst = 0.0
    for matrix in presentation.letter_matrices():
        images = representatives @ matrix.T
        worst = max(worst, float(np.max(nearest_projective_distance(images, representatives))))
    return worst


def approximate_limit_set(
    presentation: GroupPresentation,
    max_len: int,
    gap_min: Optional[float] = None,
    dedupe_radius: Optional[float] = None,
    refine: bool = True,
    budget: Optional[int] = None
) -> LimitSetSample:
    """
    Polos p₊(g), p₋(g) das palavras com gap ≥ gap_min, deduplicados.

    Args:
        presentation: Geradores
        max_len: Comprimento máximo das palavras
        gap_min: Gap mínimo λ − μ (padrão 10)
        dedupe_radius: Raio de deduplicação em radianos (padrão 1e-4)
        refine: Refinar polos de Cartan para pontos fixos atratores
        budget: Limite de elementos enumerados

    Raises:
        EmptySampleError: Nenhuma palavra atingiu gap_min
    """
    gap_min = settings.sampling.gap_min if gap_min is None else gap_min
    dedupe_radius = settings.sampling.dedupe_radius if dedupe_radius is None else dedupe_radius

    words, mats = enumerate_word_arrays(presentation, max_len, budget)
    if not words:
        raise EmptySampleError(f"Nenhuma palavra com max_len={max_len}")

    gaps, p_plus, p_minus = p1_data_batch(mats)
    selected = np.flatnonzero(gaps >= gap_min)
    if selected.size == 0:
        raise EmptySampleError(
            f"Nenhuma palavra atingiu gap {gap_min} (máximo {float(np.max(gaps)):.3f})"
        )

    sel_mats = mats[selected]
    plus = p_plus[selected]
    minus = p_minus[selected]
    if refine:
        gram = gram_matrix(FormBasis.DIAGONAL, presentation.dim)
        inverse_mats = gram @ np.swapaxes(sel_mats, 1, 2) @ gram
        plus = attracting_points_batch(sel_mats, plus)
        minus = attracting_points_batch(inverse_mats, minus)

    candidate_words: List[str] = []
    candidate_gaps: List[float] = []
    candidates = np.empty((2 * selected.size, presentation.dim))
    candidates[0::2] = plus
    candidates[1::2] = minus
    for index in selected:
        candidate_words.extend([words[index], invert_word(words[index])])
        candidate_gaps.extend([gaps[index], gaps[index]])

    kept = dedupe_projective(candidates, dedupe_radius)
    representatives = canonicalize_rows(candidates[kept])
    residual = invariance_residual(presentation, representatives)

    logger.debug(
        "Conjunto limite aproximado",
        words=len(words),
        selected=int(selected.size),
        points=int(kept.size),
        invariance_residual=residual
    )
    return LimitSetSample(
        representatives=representatives,
        source_words=tuple(candidate_words[i] for i in kept),
        dedupe_radius=dedupe_radius,
        gaps=np.array(candidate_gaps)[kept],
        invariance_residual=residual
    )


def hausdorff_distance(first: LimitSetSample, second: LimitSetSample) -> float:
    """Distância de Hausdorff projetiva entre duas amostras."""
    forward = nearest_projective_distance(first.representatives, second.representatives)
    backward = nearest_projective_distance(second.representatives, first.representatives)
    return float(max(forward.max(), backward.max()))


class NegativityReport(NamedTuple):
    negative: bool
    worst_pair: Tuple[int, int]
    worst_value: float
    signs: np.ndarray


def choose_signs(gram: np.ndarray) -> np.ndarray:
    """
    Sinais sᵢ propagados ao longo de uma árvore geradora máxima em |⟨xᵢ,xⱼ⟩|,
    impondo sᵢsⱼ⟨xᵢ,xⱼ⟩ < 0 em cada aresta.
    """
    count = gram.shape[0]
    weights = 2.0 - np.abs(gram)
    np.fill_diagonal(weights, 0.0)
    tree = minimum_spanning_tree(np.triu(weights))
    tree = tree + tree.T
    signs = np.ones(count)
    order, predecessors = breadth_first_order(tree, 0, directed=False, return_predecessors=True)
    for node in order[1:]:
        parent = predecessors[node]
        signs[node] = -signs[parent] if gram[parent, node] > 0.0 else signs[parent]
    if order.size < count:
        logger.debug("Grafo de proximidade desconexo", reached=int(order.size), total=count)
    return signs


def certify_negative(sample: LimitSetSample, choose: bool = True) -> NegativityReport:
    """
    Verdadeiro sse todos os produtos ⟨xᵢ, xⱼ⟩ (i ≠ j) dos representantes com
    sinal coerente são < −1e-9.

    Args:
        sample: Amostra com ao menos dois pontos
        choose: Procurar sinais coerentes (senão usa os representantes dados)
    """
    if len(sample) < 2:
        raise ValueError("Certificação exige ao menos 2 pontos")
    reps = sample.representatives
    gram = reps @ gram_matrix(FormBasis.DIAGONAL, sample.dim) @ reps.T
    signs = choose_signs(gram) if choose else np.ones(len(sample))
    signed = gram * signs[:, None] * signs[None, :]
    signed[np.tril_indices(len(sample))] = -np.inf
    i, j = np.unravel_index(np.argmax(signed), signed.shape)
    worst = float(signed[i, j])
    return NegativityReport(
        negative=worst < -settings.numerics.form_tolerance,
        worst_pair=(int(i), int(j)),
        worst_value=worst,
        signs=signs
    )


def lift_acausal(sample: LimitSetSample) -> LimitSetSample:
    """
    Escolhe sinais e ramos de tempo para um levantamento acausal numa única laje.

    O primeiro ponto vai para t₀ = θ₀ ∈ [0, 2π); os demais para
    t₀ + wrap(θᵢ − θ₀) ∈ (t₀ − π, t₀ + π].

    Raises:
        InconsistentLiftError: Amostra não negativa ou levantamento não acausal
    """
    report = certify_negative(sample)
    if not report.negative:
        raise InconsistentLiftError(
            f"Amostra não negativa: par {report.worst_pair} com ⟨·,·⟩ = {report.worst_value:.3e}"
        )
    signed = sample.representatives * report.signs[:, None]
    xs, thetas = klein_to_conformal_array(signed)
    base = thetas[0]
    wrapped = np.mod(thetas - base + np.pi, 2.0 * np.pi) - np.pi
    wrapped[wrapped == -np.pi] = np.pi
    ts = base + wrapped

    check = acausality_report(xs, ts, AcausalityMode.ACAUSAL)
    if not check.certified:
        raise InconsistentLiftError(
            f"Levantamento não acausal: par {check.worst_pair} com folga {check.worst_slack:.3e}"
        )
    return replace(sample, representatives=signed, lift_xs=xs, lift_ts=ts)


def sample_from_universal(xs: np.ndarray, ts: np.ndarray, words: Sequence[str] = (), dedupe_radius: float = 0.0) -> LimitSetSample:
    """Amostra já levantada a partir de pontos universais (conjuntos analíticos)."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ts = np.asarray(ts, dtype=float).reshape(-1)
    reps = np.column_stack([np.cos(ts), np.sin(ts), xs]) / np.sqrt(2.0)
    labels = tuple(words) if words else tuple(f"p{i}" for i in range(xs.shape[0]))
    return LimitSetSample(reps, labels, dedupe_radius, lift_xs=xs, lift_ts=ts)
