"""
Orquestrador das execuções da CLI: resolve entradas, chama as ferramentas,
grava os arquivos e decide o código de saída.
"""

from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Tuple

from ..config.settings import settings
from ..data.processor import GeometryDataIO
from ..geometry.core_forms import FormBasis
from ..geometry.errors import GeometryError
from ..geometry.fixtures import Fixture, FixtureName, build_fixture
from ..geometry.limit_sets import certify_negative
from ..tools.cartan_tool import CartanTool
from ..tools.domain_tool import DomainTool
from ..tools.geodesics_tool import GeodesicsTool
from ..tools.limit_set_tool import LimitSetTool, sample_frame
from ..tools.mesh_tool import MeshTool
from ..tools.verify_tool import VerifyTool
from ..utils.config import RunConfig
from ..utils.logger import get_logger
from .base_agent import BaseAgent

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED_BOUND = 1
EXIT_INPUT_ERROR = 2

SUITE_DEFAULT_N = {'join': 3}

GEODESICS_BOUNDS = {
    'delta_max_difference': 1e-6,
    'triangle_defect': 1e-9,
    'fiber_identity_error': 1e-8,
    'fiber_monte_carlo_excess': 1e-3,
    'photon_round_trip_error': 1e-9,
    'photon_misses': 0.0,
    'photon_disconnected': 0.0,
}


class InputError(GeometryError, ValueError):
    """Resultado de ferramenta marcado como erro de entrada."""


class GeometryOrchestrator(BaseAgent):
    """
    Executa um comando (``cartan``, ``limitset``, ``domain``, ``geodesics``,
    ``verify``, ``export-mesh``) e devolve o código de saída:
    0 sucesso, 1 limite de verificação reprovado, 2 erro de entrada.
    """

    def __init__(self):
        super().__init__("GeometryOrchestrator")

        self.cartan_tool = CartanTool()
        self.limit_set_tool = LimitSetTool()
        self.domain_tool = DomainTool()
        self.geodesics_tool = GeodesicsTool()
        self.mesh_tool = MeshTool()
        self.verify_tool = VerifyTool(self.geodesics_tool)

        self.execution_state: Dict[str, Any] = {
            'current_step': None,
            'completed_steps': [],
            'errors': [],
            'start_time': None,
            'outputs': [],
            'result': {},
        }

    async def run(self, config: RunConfig) -> int:
        """
        Args:
            config: Parâmetros da execução

        Returns:
            Código de saída; detalhes ficam em ``execution_state``
        """
        self._initialize_execution(config)

        issues = config.validate()
        if issues:
            for issue in issues:
                self._log_step_error('validation', ValueError(issue))
            return self._finalize_execution(EXIT_INPUT_ERROR, "configuração inválida")

        io = GeometryDataIO(config.output_dir)
        handlers = {
            'cartan': self._run_cartan,
            'limitset': self._run_limitset,
            'domain': self._run_domain,
            'geodesics': self._run_geodesics,
            'verify': self._run_verify,
            'export-mesh': self._run_export_mesh,
        }
        try:
            code = await handlers[config.command](config, io)
        except (ValueError, GeometryError, OSError) as exc:
            self._log_step_error(self.execution_state['current_step'] or config.command, exc)
            return self._finalize_execution(EXIT_INPUT_ERROR, f"erro de entrada: {exc}")
        except Exception as exc:
            self._handle_execution_error(exc)
            raise

        reason = "limite de verificação reprovado" if code == EXIT_FAILED_BOUND else "concluído"
        return self._finalize_execution(code, reason)

    # ------------------------------------------------------------------
    # Entradas
    # ------------------------------------------------------------------

    @staticmethod
    def _checked(result: Dict[str, Any]) -> Dict[str, Any]:
        if not result.get('success', False) and result.get('input_error'):
            raise InputError(f"{result.get('error_type', 'Erro')}: {result.get('error')}")
        return result

    def _default_fixture(self, config: RunConfig) -> str:
        if config.fixture:
            return config.fixture
        if config.command == 'limitset':
            return FixtureName.CYCLIC_PROXIMAL.value
        return FixtureName.SCHOTTKY.value if config.n == 2 else FixtureName.FUCHSIAN_SPHERE.value

    def _build_fixture(self, config: RunConfig, name: str) -> Fixture:
        params: Dict[str, Any] = {}
        if config.overridden('mesh'):
            params['mesh'] = config.mesh
        fixture_name = FixtureName(name)
        if config.overridden('max_len') and fixture_name in (FixtureName.CYCLIC_PROXIMAL, FixtureName.SCHOTTKY):
            params['max_len'] = config.max_len
        if 'p' in config.options and fixture_name is FixtureName.JOIN_SPHERES:
            params['p'] = config.options['p']
        self.log_decision("fixture", name, "exemplo embutido", {'n': config.n, **params})
        return build_fixture(fixture_name, config.n, **params)

    async def _resolve_sample(self, config: RunConfig, io: GeometryDataIO) -> Tuple[Dict[str, Any], float]:
        """
        Amostra de Λ do arquivo de geradores ou de um exemplo.

        Returns:
            (resultado no formato de ``LimitSetTool``, mesh a usar)
        """
        self._update_step("sample")
        if config.input_path is not None:
            presentation = io.load_generators(config.input_path)
            self.log_decision("input", str(config.input_path), "arquivo de geradores", {'rank': presentation.rank})
            result = self._checked(await self.limit_set_tool.sample_limit_set(presentation, config.max_len))
            self._complete_step("sample")
            return result, config.mesh

        fixture = self._build_fixture(config, self._default_fixture(config))
        sample = fixture.sample
        negativity = certify_negative(sample) if len(sample) >= 2 else None
        result = {
            'success': True,
            'sample': sample,
            'frame': sample_frame(sample),
            'points': len(sample),
            'invariance_residual': sample.invariance_residual,
            'negative': bool(negativity.negative) if negativity else None,
            'worst_pair': negativity.worst_pair if negativity else None,
            'worst_value': negativity.worst_value if negativity else None,
            'lifted': sample.has_lift,
            'fixture': fixture.name.value,
        }
        self._complete_step("sample")
        return result, fixture.mesh

    def _record_output(self, path: Path) -> None:
        self.execution_state['outputs'].append(str(path))

    # ------------------------------------------------------------------
    # Comandos
    # ------------------------------------------------------------------

    async def _run_cartan(self, config: RunConfig, io: GeometryDataIO) -> int:
        self._update_step("cartan")
        matrices = io.load_matrices(config.input_path)
        basis = FormBasis(config.options.get('basis', 'diagonal'))
        result = self._checked(await self.cartan_tool.decompose(matrices, basis))
        self._record_output(io.write_csv(result['frame'], 'cartan.csv'))
        self.execution_state['result'] = {
            'command': 'cartan',
            'rows': result['frame'].to_dict('records'),
            'max_reconstruction_error': result['max_reconstruction_error'],
        }
        self._complete_step("cartan")
        return EXIT_OK

    async def _run_limitset(self, config: RunConfig, io: GeometryDataIO) -> int:
        result, _ = await self._resolve_sample(config, io)
        self._update_step("limitset_export")
        self._record_output(io.write_csv(result['frame'], 'limit_set.csv'))
        report = {key: result[key] for key in (
            'points', 'invariance_residual', 'negative', 'worst_pair', 'worst_value', 'lifted'
        )}
        report['config'] = config.to_dict()
        self._record_output(io.write_json(report, 'limit_set_report.json'))
        self.execution_state['result'] = {'command': 'limitset', **report}
        self._complete_step("limitset_export")
        return EXIT_OK

    async def _domain_from_config(self, config: RunConfig, io: GeometryDataIO):
        result, mesh = await self._resolve_sample(config, io)
        if result['negative'] is False:
            raise InputError(
                f"Amostra não negativa (par {result['worst_pair']}, ⟨·,·⟩ = {result['worst_value']:.3e}); Ω indefinido"
            )
        self._update_step("domain")
        built = self._checked(await self.domain_tool.build_domain(result['sample'], mesh))
        self._complete_step("domain")
        return built['domain']

    async def _run_domain(self, config: RunConfig, io: GeometryDataIO) -> int:
        domain = await self._domain_from_config(config, io)
        self._update_step("domain_export")
        grids = self._checked(await self.domain_tool.export_grids(domain, config.options.get('grid_size')))
        self._record_output(io.write_csv(grids['envelopes'], 'envelopes.csv'))
        self._record_output(io.write_csv(grids['regions'], 'regions.csv'))
        report = {
            'n': domain.n,
            'mesh': domain.mesh,
            'lambda_points': len(domain.sample),
            'time_window': list(domain.time_window()),
            'label_counts': grids['label_counts'],
            'boundary_empty': grids['boundary_empty'],
            'max_width': grids['max_width'],
            'config': config.to_dict(),
        }
        self._record_output(io.write_json(report, 'domain_report.json'))
        self.execution_state['result'] = {'command': 'domain', **report}
        self._complete_step("domain_export")
        return EXIT_OK

    async def _run_geodesics(self, config: RunConfig, io: GeometryDataIO) -> int:
        probes = config.options.get('probes', settings.domain.probe_count)
        seed = config.seed
        n = config.n

        self._update_step("geodesics")
        delta = self._checked(await self.geodesics_tool.delta_checks(n, pairs=min(100, probes), seed=seed))
        fiber = self._checked(await self.geodesics_tool.fiber_checks(n, count=min(1000, probes), seed=seed))
        expansion = self._checked(await self.geodesics_tool.expansion_checks(n, trials=probes, seed=seed))
        photons = self._checked(await self.geodesics_tool.photon_round_trips(n, count=min(1000, probes), seed=seed))

        self._record_output(io.write_csv(delta['frame'], 'delta_checks.csv'))
        self._record_output(io.write_csv(fiber['frame'], 'fiber_checks.csv'))
        self._record_output(io.write_csv(expansion['frame'], 'expansion.csv'))

        report: Dict[str, Any] = {
            'delta_max_difference': delta['max_difference'],
            'triangle_defect': delta['triangle_defect'],
            'fiber_identity_error': fiber['identity_error'],
            'fiber_monte_carlo_excess': fiber['monte_carlo_excess'],
            'fiber_monte_carlo_gap': fiber['monte_carlo_gap'],
            'c_est': expansion['c_est'],
            'c_est_inverse': expansion['c_est_inverse'],
            'photon_round_trip_error': photons['round_trip_error'],
            'photon_conjugate_error': photons['conjugate_error'],
        }

        if config.input_path is not None or config.fixture is not None:
            domain = await self._domain_from_config(config, io)
            self._update_step("photon_intersections")
            hits = self._checked(await self.geodesics_tool.photon_intersections(
                domain, count=min(1000, probes), samples=config.options.get('geodesic_samples'), seed=seed
            ))
            self._record_output(io.write_csv(hits['frame'], 'photon_intersections.csv'))
            report.update({'photons': hits['photons'], 'hit_rate': hits['hit_rate'], 'connected_rate': hits['connected_rate']})
            report['photon_misses'] = 1.0 - hits['hit_rate']
            report['photon_disconnected'] = 1.0 - hits['connected_rate']
            self._complete_step("photon_intersections")

        passed = all([
            self.check_bound(name, report[name], bound)
            for name, bound in GEODESICS_BOUNDS.items() if name in report
        ])
        report['failed_bounds'] = self.current_run.failed_bounds
        report['config'] = config.to_dict()
        self._record_output(io.write_json(report, 'geodesics_report.json'))
        self.execution_state['result'] = {'command': 'geodesics', **report}
        self._complete_step("geodesics")
        return EXIT_OK if passed else EXIT_FAILED_BOUND

    async def _run_verify(self, config: RunConfig, io: GeometryDataIO) -> int:
        suite = config.fixture
        n = config.n if config.overridden('n') else SUITE_DEFAULT_N.get(suite, 2)
        options = {key: value for key, value in config.options.items() if key != 'overrides'}
        options.setdefault('seed', config.seed)
        if config.overridden('max_len'):
            options['max_len'] = config.max_len
        if config.overridden('mesh'):
            options['mesh'] = config.mesh
        self.log_decision("suite", suite, "verificação solicitada", {'n': n})

        self._update_step("verify")
        report = self._checked(await self.verify_tool.run_suite(suite, n, options))
        self.check_bound(f"verificações reprovadas ({suite})", len(report['failed_checks']), 0)
        payload = {key: report[key] for key in ('suite', 'n', 'checks', 'passed', 'failed_checks')}
        payload['config'] = config.to_dict()
        self._record_output(io.write_json(payload, f"verify_{suite}.json"))
        self.execution_state['result'] = {'command': 'verify', **payload}
        self._complete_step("verify")
        return EXIT_OK if report['passed'] else EXIT_FAILED_BOUND

    async def _run_export_mesh(self, config: RunConfig, io: GeometryDataIO) -> int:
        if config.n != 2:
            raise ValueError(f"export-mesh exige n = 2 (recebeu {config.n})")
        domain = await self._domain_from_config(config, io)
        self._update_step("export_mesh")
        meshes = self._checked(await self.mesh_tool.build_surfaces(
            domain, config.options.get('rings'), config.options.get('sectors')
        ))
        self._record_output(io.write_obj(meshes['surfaces'], 'domain_mesh.obj'))
        self.execution_state['result'] = {'command': 'export-mesh', 'vertex_counts': meshes['vertex_counts']}
        self._complete_step("export_mesh")
        return EXIT_OK

    # ------------------------------------------------------------------
    # Estado da execução
    # ------------------------------------------------------------------

    def _initialize_execution(self, config: RunConfig) -> None:
        self.execution_state = {
            'current_step': 'initialization',
            'completed_steps': [],
            'errors': [],
            'start_time': datetime.now(),
            'config': config.to_dict(),
            'outputs': [],
            'result': {},
        }
        logger.info("Execução iniciada", command=config.command, fixture=config.fixture)
        self.begin_run(config.command, config.to_dict())

    def _update_step(self, step_name: str) -> None:
        self.execution_state['current_step'] = step_name
        logger.debug(f"Passo: {step_name}")

    def _complete_step(self, step_name: str) -> None:
        self.execution_state['completed_steps'].append(step_name)

    def _log_step_error(self, step_name: str, error: Exception) -> None:
        self.execution_state['errors'].append({
            'step': step_name,
            'error': str(error),
            'error_type': type(error).__name__,
            'timestamp': datetime.now().isoformat(),
        })
        logger.error(f"Erro no passo {step_name}", error=str(error))

    def _finalize_execution(self, exit_code: int, reason: str) -> int:
        elapsed = (datetime.now() - self.execution_state['start_time']).total_seconds()
        self.execution_state['exit_code'] = exit_code
        self.execution_state['execution_time'] = elapsed
        self.execution_state['run'] = self.end_run(exit_code, reason).to_dict()
        logger.info(
            "Execução finalizada",
            status="sucesso" if exit_code == EXIT_OK else "falha",
            exit_code=exit_code,
            execution_time=round(elapsed, 3),
            outputs=len(self.execution_state['outputs']),
        )
        return exit_code

    def _handle_execution_error(self, error: Exception) -> None:
        self._log_step_error(self.execution_state['current_step'] or 'unknown', error)
        self.log_decision("execution_failed", type(error).__name__, str(error))

    def get_errors(self) -> List[Dict[str, Any]]:
        return list(self.execution_state['errors'])

    def health_check(self) -> Dict[str, Any]:
        status: Dict[str, Any] = {
            'status': 'healthy',
            'timestamp': datetime.now().isoformat(),
            'tools': {},
        }
        tools = [
            ('cartan_tool', self.cartan_tool),
            ('limit_set_tool', self.limit_set_tool),
            ('domain_tool', self.domain_tool),
            ('geodesics_tool', self.geodesics_tool),
            ('mesh_tool', self.mesh_tool),
            ('verify_tool', self.verify_tool),
        ]
        for name, tool in tools:
            try:
                tool_status = tool.health_check()
            except Exception as exc:
                tool_status = {'status': 'error', 'error': str(exc)}
            status['tools'][name] = tool_status
            if tool_status.get('status') != 'healthy':
                status['status'] = 'degraded'
        return status
