"""
Suítes de verificação dos exemplos embutidos: cada suíte compara o pipeline
numérico com os dados analíticos do exemplo e devolve um relatório com
``passed`` por verificação.
"""

from typing import Any, Dict, Optional

import numpy as np

from ..config.settings import settings
from ..geometry.causality import sphere_distance
from ..geometry.core_forms import form_inner, split_basis_in_diagonal
from ..geometry.fixtures import (
    FixtureName,
    build_fixture,
    check_diamond,
    check_join,
    properness_probe,
)
from ..geometry.groups import act_projective_array, boost_element, projective_distance, random_element
from ..geometry.invisible_domain import FUTURE_SIDE_LABELS, Component, InvisibleDomain
from ..geometry.limit_sets import certify_negative
from ..utils.logger import get_logger, log_bound
from .base_tool import BaseTool
from .geodesics_tool import GeodesicsTool

logger = get_logger(__name__)

SUITES = ('fuchsian-diamond', 'join', 'schottky-properness', 'cyclic', 'schottky')


def _null_sample(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Representantes unitários de pontos de Ein_{1,n−1}."""
    theta = rng.uniform(0.0, 2.0 * np.pi, count)
    xs = rng.standard_normal((count, n))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    return np.column_stack([np.cos(theta), np.sin(theta), xs]) / np.sqrt(2.0)


class VerifyTool(BaseTool):
    """Executa as suítes nomeadas e agrega os limites verificados."""

    def __init__(self, geodesics: Optional[GeodesicsTool] = None):
        super().__init__("VerifyTool")
        self.geodesics = geodesics or GeodesicsTool()

    async def run_suite(self, suite: str, n: Optional[int] = None, options: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Args:
            suite: Um de ``SUITES``
            n: Dimensão (padrão das configurações; exemplos de Schottky usam 2)
            options: Parâmetros específicos da suíte (probes, seed, max_len, ...)

        Returns:
            Relatório com ``checks``, ``passed`` e ``success`` (= passed)
        """
        options = dict(options or {})
        n = settings.sampling.default_n if n is None else n
        handlers = {
            'fuchsian-diamond': self._fuchsian_diamond,
            'join': self._join,
            'schottky-properness': self._schottky_properness,
            'cyclic': self._cyclic,
            'schottky': self._schottky,
        }

        async def body() -> Dict[str, Any]:
            if suite not in handlers:
                raise ValueError(f"Suíte desconhecida: {suite} (opções: {', '.join(SUITES)})")
            checks = await handlers[suite](n, options)
            passed = all(check['passed'] for check in checks.values())
            failed = [name for name, check in checks.items() if not check['passed']]
            return {
                'suite': suite,
                'n': n,
                'checks': checks,
                'passed': passed,
                'failed_checks': failed,
                'success': passed,
                'summary': f"{suite}: {len(checks) - len(failed)}/{len(checks)} verificações",
            }

        return await self.run_logged("run_suite", {'suite': suite, 'n': n}, body)

    # ------------------------------------------------------------------
    # Suítes com dados analíticos
    # ------------------------------------------------------------------

    async def _fuchsian_diamond(self, n: int, options: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        params = {key: options[key] for key in ('count', 'mesh') if key in options}
        fixture = build_fixture(FixtureName.FUCHSIAN_SPHERE, n, **params)
        report = check_diamond(
            fixture,
            grid_size=options.get('grid_size', 10_000),
            probes=options.get('probes', settings.domain.probe_count),
            seed=options.get('seed'),
        )
        log_bound(self.logger, "desvio do diamante", report['max_deviation'], report['bound'])
        return {'diamond': report}

    async def _join(self, n: int, options: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        ps = options.get('p')
        ps = [ps] if ps is not None else list(range(0, n - 1))
        checks = {}
        for p in ps:
            fixture = build_fixture(FixtureName.JOIN_SPHERES, n, p=p, **({'count': options['count']} if 'count' in options else {}))
            report = check_join(
                fixture,
                grid_size=options.get('grid_size', 16_384),
                probes=options.get('probes', 4000),
                seed=options.get('seed'),
            )
            log_bound(self.logger, f"junção p={p}", report['join_deviation'], report['bound'])
            checks[f'join_p{p}'] = report
        return checks

    async def _schottky_properness(self, n: int, options: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        fixture = build_fixture(FixtureName.SCHOTTKY, n)
        report = properness_probe(
            fixture,
            max_len=options.get('max_len', settings.sampling.max_len),
            probes=options.get('probes', 100),
            radius=options.get('radius', 0.1),
            seed=options.get('seed'),
        )
        log_bound(self.logger, "violações de acausalidade", report['acausality_violations'], 0)
        return {'properness': report}

    # ------------------------------------------------------------------
    # Grupo cíclico: Cartan e dinâmica de polos
    # ------------------------------------------------------------------

    async def _cyclic(self, n: int, options: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        rng = np.random.default_rng(options.get('seed', settings.sampling.seed))
        fixture = build_fixture(FixtureName.CYCLIC_PROXIMAL, n)
        negativity = certify_negative(fixture.sample)
        limit_points = {
            'points': len(fixture.sample),
            'expected': fixture.expected['limit_points'],
            'negative': bool(negativity.negative),
            'passed': len(fixture.sample) == fixture.expected['limit_points'] and bool(negativity.negative),
        }
        return {
            'limit_points': limit_points,
            'cartan_reconstruction': self._cartan_reconstruction(rng, n, options.get('elements', 1000)),
            'pole_dynamics': self._pole_dynamics(rng, n, options.get('lam', 1.0), options.get('mu', 0.2)),
        }

    def _cartan_reconstruction(self, rng: np.random.Generator, n: int, count: int) -> Dict[str, Any]:
        worst_error = 0.0
        worst_exponent = 0.0
        ordered = True
        for _ in range(count):
            g, lam, mu = random_element(rng, n)
            factors = g.cartan
            rec_lam, rec_mu = factors.a_exponents
            error = np.linalg.norm(factors.reconstruct() - g.diagonal) / np.linalg.norm(g.diagonal)
            worst_error = max(worst_error, float(error))
            worst_exponent = max(worst_exponent, abs(rec_lam - lam), abs(rec_mu - mu))
            ordered = ordered and rec_lam >= rec_mu >= 0.0
        bound = settings.numerics.cartan_tolerance
        passed = log_bound(self.logger, "reconstrução de Cartan", max(worst_error, worst_exponent), bound)
        return {
            'elements': count,
            'max_relative_error': worst_error,
            'max_exponent_error': worst_exponent,
            'weyl_ordered': ordered,
            'bound': bound,
            'passed': bool(passed and ordered),
        }

    def _pole_dynamics(self, rng: np.random.Generator, n: int, lam: float, mu: float, steps: int = 40) -> Dict[str, Any]:
        """sup d(gⁱ·p, p₊) sobre 200 pontos de Ein afastados do cone de luz de p₋."""
        g = boost_element(lam, mu, n).diagonal
        dim = n + 2
        p_plus = split_basis_in_diagonal(0, dim)
        p_minus = split_basis_in_diagonal(dim - 1, dim)
        p_plus, p_minus = p_plus / np.linalg.norm(p_plus), p_minus / np.linalg.norm(p_minus)

        candidates = _null_sample(rng, n, 2000)
        pairing = np.abs(form_inner(candidates, p_minus))
        points = candidates[pairing > 0.1][:200]

        sups = []
        for _ in range(steps):
            points = act_projective_array(g, points)
            sups.append(float(np.max(projective_distance(points, p_plus))))

        reached = next((i + 1 for i, value in enumerate(sups) if value < 1e-6), None)
        significant = [value for value in sups if value > 1e-12]
        monotone = all(b <= a * (1.0 + 1e-9) for a, b in zip(significant, significant[1:]))
        return {
            'lambda': lam,
            'mu': mu,
            'points': int(points.shape[0]),
            'final_sup': sups[-1],
            'iterations_to_1e-6': reached,
            'eventually_monotone': monotone,
            'passed': reached is not None and monotone,
        }

    # ------------------------------------------------------------------
    # Grupo de Schottky: Ω, regiões e geodésicas
    # ------------------------------------------------------------------

    async def _schottky(self, n: int, options: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
        fixture = build_fixture(FixtureName.SCHOTTKY, n)
        domain = fixture.domain()
        rng = np.random.default_rng(options.get('seed', settings.sampling.seed))
        probes = options.get('probes', settings.domain.probe_count)

        radius = fixture.expected['ping_pong_radius']
        checks = {
            'ping_pong': {'radius': radius, 'bound': np.pi / 4.0, 'passed': bool(radius < np.pi / 4.0)},
            'dual_cone': self._dual_cone_agreement(domain, rng, probes),
            'region_partition': self._region_partition(domain, rng, probes),
            'lipschitz': self._lipschitz(domain, rng, options.get('pairs', 100_000)),
        }

        photons = await self.geodesics.photon_intersections(
            domain,
            count=options.get('photons', 1000),
            samples=options.get('geodesic_samples', 512),
            seed=options.get('seed'),
        )
        if not photons['success']:
            raise ValueError(photons['error'])
        checks['photon_intersection'] = {
            'photons': photons['photons'],
            'hit_rate': photons['hit_rate'],
            'connected_rate': photons['connected_rate'],
            'passed': photons['photons'] > 0 and photons['hit_rate'] == 1.0 and photons['connected_rate'] == 1.0,
        }
        return checks

    def _dual_cone_agreement(self, domain: InvisibleDomain, rng: np.random.Generator, probes: int) -> Dict[str, Any]:
        xs, ts = domain.random_probes(rng, probes)
        by_envelopes = domain.contains_array(xs, ts, margin=0.0)
        by_cone = domain.dual_cone_array(xs, ts)
        slack = np.minimum(np.abs(domain.f_plus(xs) - ts), np.abs(ts - domain.f_minus(xs)))
        disagree = by_envelopes != by_cone
        band = 2.0 * domain.mesh
        outside_band = int(np.sum(disagree & (slack > band)))
        rate = float(np.mean(disagree))
        log_bound(self.logger, "discordância do cone dual", rate, 0.01)
        return {
            'probes': probes,
            'disagreement_rate': rate,
            'disagreements_outside_band': outside_band,
            'band': band,
            'passed': rate <= 0.01 and outside_band == 0,
        }

    def _region_partition(self, domain: InvisibleDomain, rng: np.random.Generator, probes: int) -> Dict[str, Any]:
        xs, ts = domain.random_probes(rng, probes, Component.E1)
        grid = domain.classify_grid(xs, ts)
        inside = domain.contains_array(xs, ts)
        unlabeled = sum(
            1 for label, is_inside in zip(grid.labels, inside)
            if is_inside and label not in FUTURE_SIDE_LABELS
        )
        counts = grid.counts()
        return {
            'probes': probes,
            'inside': int(np.sum(inside)),
            'label_counts': counts,
            'unlabeled': unlabeled,
            'boundary_empty': grid.boundary_empty,
            'passed': unlabeled == 0 and not grid.boundary_empty,
        }

    def _lipschitz(self, domain: InvisibleDomain, rng: np.random.Generator, pairs: int) -> Dict[str, Any]:
        dim = domain.n + 1
        first = rng.standard_normal((pairs, dim))
        second = rng.standard_normal((pairs, dim))
        first /= np.linalg.norm(first, axis=1, keepdims=True)
        second /= np.linalg.norm(second, axis=1, keepdims=True)
        distances = sphere_distance(first, second)

        plus_defect = float(np.max(np.abs(domain.f_plus(first) - domain.f_plus(second)) - distances))
        minus_defect = float(np.max(np.abs(domain.f_minus(first) - domain.f_minus(second)) - distances))
        on_lambda = float(max(
            np.max(np.abs(domain.f_plus(domain.lambda_xs) - domain.lambda_ts)),
            np.max(np.abs(domain.f_minus(domain.lambda_xs) - domain.lambda_ts)),
        ))
        passed = (
            log_bound(self.logger, "Lipschitz f⁺", plus_defect, 1e-9)
            and log_bound(self.logger, "Lipschitz f⁻", minus_defect, 1e-9)
            and log_bound(self.logger, "f± em Λ", on_lambda, domain.mesh)
        )
        return {
            'pairs': pairs,
            'f_plus_defect': plus_defect,
            'f_minus_defect': minus_defect,
            'lambda_deviation': on_lambda,
            'passed': bool(passed),
        }

    def health_check(self) -> Dict[str, Any]:
        return {
            'status': 'healthy',
            'suites': list(SUITES),
            'stats': self.get_tool_stats(),
        }
