"""
Sondas do espaço de geodésicas causais: métrica δ, distância às fibras,
expansão e interseção de fótons com Ω.
"""

from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..config.settings import settings
from ..geometry.causal_geodesics import (
    Plane2,
    avoids_limit_set,
    delta_metric,
    delta_to_planes_through,
    expansion_probe,
    fiber_distance,
    hausdorff_oracle,
    intersect_domain,
    photon_curve,
    photon_plane,
    photon_tangent,
    plane_from_vectors,
)
from ..geometry.core_forms import split_basis_in_diagonal
from ..geometry.groups import boost_element, inverse
from ..geometry.invisible_domain import InvisibleDomain
from ..utils.logger import get_logger, log_bound
from .base_tool import BaseTool

logger = get_logger(__name__)


def _random_plane(rng: np.random.Generator, dim: int) -> Plane2:
    return plane_from_vectors(rng.standard_normal(dim), rng.standard_normal(dim))


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    vector = rng.standard_normal(dim)
    return vector / np.linalg.norm(vector)


def random_tangent(rng: np.random.Generator, dim: int):
    """(x, v) uniforme em T¹S^{dim−1}."""
    x = _random_unit(rng, dim)
    v = rng.standard_normal(dim)
    v -= (v @ x) * x
    return x, v / np.linalg.norm(v)


class GeodesicsTool(BaseTool):
    """Verificações numéricas sobre Gr₂(ℝ^{2,n})."""

    def __init__(self):
        super().__init__("GeodesicsTool")

    async def delta_checks(self, n: int, pairs: int = 100, samples: int = 10_000, seed: Optional[int] = None) -> Dict[str, Any]:
        """
        δ por ângulos principais contra Hausdorff amostrado, e axiomas de
        métrica em triplas.
        """
        seed = settings.sampling.seed if seed is None else seed

        async def body() -> Dict[str, Any]:
            rng = np.random.default_rng(seed)
            dim = n + 2
            rows = []
            for index in range(pairs):
                first, second = _random_plane(rng, dim), _random_plane(rng, dim)
                delta = delta_metric(first, second)
                oracle = hausdorff_oracle(first, second, samples)
                rows.append({'pair': index, 'delta': delta, 'hausdorff': oracle, 'difference': abs(delta - oracle)})

            triangle_defect = 0.0
            symmetry_defect = 0.0
            for _ in range(pairs):
                a, b, c = (_random_plane(rng, dim) for _ in range(3))
                ab, bc, ac = delta_metric(a, b), delta_metric(b, c), delta_metric(a, c)
                triangle_defect = max(triangle_defect, ac - ab - bc)
                symmetry_defect = max(symmetry_defect, abs(ab - delta_metric(b, a)))

            frame = pd.DataFrame(rows)
            max_difference = float(frame['difference'].max())
            return {
                'frame': frame,
                'max_difference': max_difference,
                'triangle_defect': float(triangle_defect),
                'symmetry_defect': float(symmetry_defect),
                'summary': f"max |δ − Hausdorff| = {max_difference:.3e}",
            }

        return await self.run_logged("delta_checks", {'n': n, 'pairs': pairs}, body)

    async def fiber_checks(self, n: int, count: int = 1000, planes_per_point: int = 10_000, seed: Optional[int] = None) -> Dict[str, Any]:
        """
        δ(P, F_q) contra o ângulo de projeção arccos ‖Π_P q‖ e contra o ínfimo
        de Monte Carlo sobre planos que contêm q.

        ``monte_carlo_excess`` = max(δ(P, F_q) − ínfimo), deve ficar ≈ 0;
        ``monte_carlo_gap`` = max(ínfimo − δ(P, F_q)), o quanto a amostragem
        chega perto.
        """
        seed = settings.sampling.seed if seed is None else seed

        async def body() -> Dict[str, Any]:
            rng = np.random.default_rng(seed)
            dim = n + 2
            rows = []
            for index in range(count):
                plane = _random_plane(rng, dim)
                q = _random_unit(rng, dim)
                distance = fiber_distance(plane, q)
                projection = float(np.arccos(np.clip(np.linalg.norm(plane.frame @ q), 0.0, 1.0)))
                directions = rng.standard_normal((planes_per_point, dim))
                monte_carlo = float(np.min(delta_to_planes_through(plane, q, directions)))
                rows.append({
                    'index': index,
                    'fiber_distance': distance,
                    'projection_angle': projection,
                    'monte_carlo_inf': monte_carlo,
                })
            frame = pd.DataFrame(rows)
            identity_error = float(np.max(np.abs(frame['fiber_distance'] - frame['projection_angle'])))
            beaten_by = float(np.max(frame['fiber_distance'] - frame['monte_carlo_inf']))
            gap = float(np.max(frame['monte_carlo_inf'] - frame['fiber_distance']))
            return {
                'frame': frame,
                'identity_error': identity_error,
                'monte_carlo_excess': beaten_by,
                'monte_carlo_gap': gap,
                'summary': f"erro da identidade {identity_error:.3e}, folga de Monte Carlo {gap:.3e}",
            }

        return await self.run_logged(
            "fiber_checks", {'n': n, 'count': count, 'planes_per_point': planes_per_point}, body
        )

    async def expansion_checks(
        self,
        n: int,
        lam: float = 6.0,
        mu: float = 2.0,
        radius: float = 0.5,
        trials: Optional[int] = None,
        seed: Optional[int] = None
    ) -> Dict[str, Any]:
        """c_est para a(λ, μ) e a(λ, μ)⁻¹ em [e₁]."""
        trials = settings.domain.probe_count if trials is None else trials

        async def body() -> Dict[str, Any]:
            g = boost_element(lam, mu, n)
            point = split_basis_in_diagonal(0, n + 2)
            rows = []
            for label, element in (('g', g), ('g_inverse', inverse(g))):
                result = expansion_probe(element, point, radius, trials, seed)
                rows.append({
                    'element': label,
                    'lambda': lam,
                    'mu': mu,
                    'radius': radius,
                    'c_est': result.c_est,
                    'valid_samples': result.valid_samples,
                    'witness_index': result.witness_index,
                })
            frame = pd.DataFrame(rows)
            return {
                'frame': frame,
                'c_est': float(rows[0]['c_est']),
                'c_est_inverse': float(rows[1]['c_est']),
                'summary': f"c_est = {rows[0]['c_est']:.4f}, inverso {rows[1]['c_est']:.4f}",
            }

        return await self.run_logged("expansion_checks", {'n': n, 'lam': lam, 'mu': mu, 'radius': radius}, body)

    async def photon_round_trips(self, n: int, count: int = 1000, seed: Optional[int] = None) -> Dict[str, Any]:
        """(x, v) → plano → (x, v) e revisita do ponto conjugado σ(p) em t = π."""
        seed = settings.sampling.seed if seed is None else seed

        async def body() -> Dict[str, Any]:
            rng = np.random.default_rng(seed)
            dim = n + 1
            round_trip = 0.0
            conjugate = 0.0
            for _ in range(count):
                x, v = random_tangent(rng, dim)
                back_x, back_v = photon_tangent(photon_plane(x, v))
                round_trip = max(round_trip, float(np.linalg.norm(back_x - x) + np.linalg.norm(back_v - v)))
                curve_xs, _ = photon_curve(back_x, back_v, np.array([np.pi]))
                conjugate = max(conjugate, float(np.linalg.norm(curve_xs[0] + x)))
            return {
                'round_trip_error': round_trip,
                'conjugate_error': conjugate,
                'count': count,
                'summary': f"ida e volta {round_trip:.3e}",
            }

        return await self.run_logged("photon_round_trips", {'n': n, 'count': count}, body)

    async def photon_intersections(
        self,
        domain: InvisibleDomain,
        count: int = 1000,
        samples: Optional[int] = None,
        seed: Optional[int] = None
    ) -> Dict[str, Any]:
        """
        Fótons de Ein_{1,n} que evitam Λ: todos devem encontrar Ω num único
        intervalo (uma quebra de banda tolerada).
        """
        seed = settings.sampling.seed if seed is None else seed

        async def body() -> Dict[str, Any]:
            rng = np.random.default_rng(seed)
            rows = []
            attempts = 0
            while len(rows) < count and attempts < 20 * count:
                attempts += 1
                plane = photon_plane(*random_tangent(rng, domain.n + 1))
                if not avoids_limit_set(plane, domain.sample):
                    continue
                result = intersect_domain(plane, domain, samples)
                rows.append({
                    'index': len(rows),
                    'hits': result.hits,
                    'arc_start': result.arc[0] if result.arc else np.nan,
                    'arc_end': result.arc[1] if result.arc else np.nan,
                    'runs': result.runs,
                    'connected': result.connected,
                })
            frame = pd.DataFrame(rows, columns=['index', 'hits', 'arc_start', 'arc_end', 'runs', 'connected'])
            hit_rate = float(frame['hits'].mean()) if rows else 0.0
            connected_rate = float(frame['connected'].mean()) if rows else 0.0
            log_bound(self.logger, "fótons que evitam Λ sem encontrar Ω", 1.0 - hit_rate, 0.0)
            return {
                'frame': frame,
                'photons': len(rows),
                'attempts': attempts,
                'hit_rate': hit_rate,
                'connected_rate': connected_rate,
                'summary': f"{len(rows)} fótons, acerto {hit_rate:.3f}",
            }

        return await self.run_logged("photon_intersections", {'count': count}, body)

    def health_check(self) -> Dict[str, Any]:
        try:
            dim = settings.sampling.default_n + 2
            plane = plane_from_vectors(np.eye(dim)[0], np.eye(dim)[1])
            value = delta_metric(plane, plane)
            return {
                'status': 'healthy' if abs(value) < 1e-12 else 'degraded',
                'self_distance': value,
                'stats': self.get_tool_stats(),
            }
        except Exception as exc:
            return {'status': 'error', 'error': str(exc)}
