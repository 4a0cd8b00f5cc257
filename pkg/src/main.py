import os
import sys
from datetime import datetime
from typing import Any, Dict, List, Optional
import asyncio

# Variáveis do .env antes dos imports do projeto
try:
    from dotenv import load_dotenv
    env_path = os.path.join(os.path.dirname(os.path.dirname(__file__)), '.env')
    load_dotenv(dotenv_path=env_path, verbose=False)
except ImportError:
    pass

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
ROOT_DIR = os.path.dirname(SCRIPT_DIR) if SCRIPT_DIR.endswith('src') else SCRIPT_DIR
if ROOT_DIR not in sys.path:
    sys.path.insert(0, ROOT_DIR)

from tabulate import tabulate

try:
    from src.agents.orchestrator import EXIT_FAILED_BOUND, EXIT_INPUT_ERROR, GeometryOrchestrator
    from src.utils.config import COMMANDS, Config, RunConfig
    from src.utils.logger import setup_logger
except ModuleNotFoundError:
    from agents.orchestrator import EXIT_FAILED_BOUND, EXIT_INPUT_ERROR, GeometryOrchestrator
    from utils.config import COMMANDS, Config, RunConfig
    from utils.logger import setup_logger

logger = setup_logger(__name__)

# Opções específicas de cada subcomando repassadas em RunConfig.options
OPTION_KEYS = ('basis', 'probes', 'grid_size', 'p', 'rings', 'sectors', 'geodesic_samples')


class GeometryApplication:
    """
    Aplicação da CLI: monta a configuração de uma chamada e delega ao
    orquestrador.
    """

    def __init__(self):
        self.config = Config()
        self.orchestrator = GeometryOrchestrator()
        logger.debug("Aplicação iniciada", **self.config.get_summary())

    async def run_command(self, command: str, **params) -> int:
        """
        Executa um subcomando.

        Args:
            command: Um de ``COMMANDS``
            **params: Campos de ``RunConfig`` e opções do subcomando

        Returns:
            Código de saída (0, 1 ou 2)
        """
        options = {key: params.pop(key) for key in OPTION_KEYS if params.get(key) is not None}
        for key in OPTION_KEYS:
            params.pop(key, None)
        run_config = RunConfig.from_env(command, options=options, **params)
        return await self.orchestrator.run(run_config)

    @property
    def result(self) -> Dict[str, Any]:
        return self.orchestrator.execution_state.get('result', {})

    @property
    def outputs(self) -> List[str]:
        return self.orchestrator.execution_state.get('outputs', [])

    def get_system_status(self) -> Dict[str, Any]:
        """
        Estado das ferramentas e da configuração do ambiente.

        Returns:
            Dict com ``overall_status`` e o estado de cada componente
        """
        try:
            status = {
                'application': 'healthy',
                'timestamp': datetime.now().isoformat(),
                'components': {
                    'orchestrator': self.orchestrator.health_check(),
                    'config': self.config.is_valid(),
                },
            }
            all_healthy = all(
                component.get('status') == 'healthy'
                for component in status['components'].values()
            )
            status['overall_status'] = 'healthy' if all_healthy else 'degraded'
            return status
        except Exception as e:
            logger.error(f"Erro ao verificar status: {str(e)}")
            return {
                'application': 'error',
                'overall_status': 'error',
                'timestamp': datetime.now().isoformat(),
                'components': {},
                'error': str(e),
            }


def _scalar(value: Any) -> bool:
    return isinstance(value, (int, float, str, bool)) or value is None


def summary_table(result: Dict[str, Any]) -> str:
    """Tabela de terminal com os valores escalares do resultado."""
    if result.get('command') == 'cartan':
        columns = ['index', 'n', 'lambda', 'mu', 'gap', 'form_residual', 'reconstruction_error']
        rows = [[row.get(column) for column in columns] for row in result.get('rows', [])]
        return tabulate(rows, headers=columns, floatfmt=".6g")

    if result.get('command') == 'verify':
        rows = []
        for name, check in result.get('checks', {}).items():
            details = ', '.join(
                f"{key}={value:.3g}" if isinstance(value, float) else f"{key}={value}"
                for key, value in check.items()
                if key != 'passed' and _scalar(value)
            )
            rows.append([name, 'ok' if check.get('passed') else 'FALHOU', details])
        return tabulate(rows, headers=['verificação', 'status', 'valores'])

    rows = [[key, value] for key, value in result.items() if key != 'command' and _scalar(value)]
    for key, value in result.items():
        if key == 'config' or not isinstance(value, dict):
            continue
        rows.extend([f"{key}.{name}", item] for name, item in value.items() if _scalar(item))
    return tabulate(rows, headers=['campo', 'valor'], floatfmt=".6g")


async def main(args) -> int:
    """Executa o subcomando e imprime o resumo; devolve o código de saída."""
    try:
        app = GeometryApplication()
        params = {
            'n': args.n,
            'max_len': args.max_len,
            'mesh': args.mesh,
            'seed': args.seed,
            'output_dir': args.out,
            'input_path': getattr(args, 'input', None),
            'fixture': getattr(args, 'suite', None) or getattr(args, 'fixture', None),
        }
        for key in OPTION_KEYS:
            params[key] = getattr(args, key, None)

        exit_code = await app.run_command(args.command, **params)

        for error in app.orchestrator.get_errors():
            print(f"erro [{error['step']}] {error['error_type']}: {error['error']}", file=sys.stderr)

        if exit_code != EXIT_INPUT_ERROR:
            print("\n" + "=" * 60)
            title = "VERIFICAÇÃO REPROVADA" if exit_code == EXIT_FAILED_BOUND else "CONCLUÍDO"
            print(f"{args.command.upper()}: {title}")
            print("=" * 60)
            print(summary_table(app.result))
            if app.outputs:
                print("\nArquivos gerados:")
                for path in app.outputs:
                    print(f"• {path}")
            print("=" * 60)
        return exit_code

    except KeyboardInterrupt:
        logger.info("Execução interrompida pelo usuário")
        return 1

    except Exception as e:
        logger.error(f"Erro inesperado: {str(e)}", error_type=type(e).__name__)
        print(f"erro inesperado: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def build_parser():
    import argparse

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--n', type=int, help='Dimensão n de AdS_{n+1} (padrão: ADS_N)')
    common.add_argument('--max-len', dest='max_len', type=int, help='Comprimento máximo das palavras')
    common.add_argument('--mesh', type=float, help='Resolução das grades de Λ')
    common.add_argument('--seed', type=int, help='Semente dos geradores aleatórios')
    common.add_argument('--out', type=str, help='Diretório de saída (padrão: ADS_OUTPUT_DIR)')

    parser = argparse.ArgumentParser(
        description="Geometria de AdS e do universo de Einstein: Cartan, Λ, Ω e geodésicas causais"
    )
    parser.add_argument(
        '--status-only',
        action='store_true',
        help='Apenas verificar status das ferramentas'
    )
    subparsers = parser.add_subparsers(dest='command', metavar='{' + ','.join(COMMANDS) + '}')

    cartan = subparsers.add_parser('cartan', parents=[common], help='Decomposição de Cartan de matrizes')
    cartan.add_argument('input', help='Arquivo de matrizes (blocos separados por linha em branco)')
    cartan.add_argument('--basis', choices=('diagonal', 'split'), help='Base da forma (padrão: diagonal)')

    for name, help_text in (
        ('limitset', 'Amostra do conjunto limite Λ'),
        ('domain', 'Envelopes f± e rótulos de regiões de Ω'),
        ('geodesics', 'Sondas do espaço de geodésicas causais'),
        ('export-mesh', 'Malhas OBJ de f± e dos horizontes (n = 2)'),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.add_argument('input', nargs='?', help='Arquivo JSON de geradores')
        sub.add_argument('--fixture', help='Exemplo embutido: cyclic, schottky, fuchsian, join')
        sub.add_argument('--p', type=int, help='Dimensão p do exemplo join')
        if name == 'domain':
            sub.add_argument('--grid-size', dest='grid_size', type=int, help='Pontos da grade de S^{n-1}')
        if name == 'geodesics':
            sub.add_argument('--probes', type=int, help='Número de sondas aleatórias')
            sub.add_argument('--geodesic-samples', dest='geodesic_samples', type=int, help='Pontos por fóton')
        if name == 'export-mesh':
            sub.add_argument('--rings', type=int, help='Anéis do disco')
            sub.add_argument('--sectors', type=int, help='Setores do disco')

    verify = subparsers.add_parser('verify', parents=[common], help='Suítes de verificação numérica')
    verify.add_argument('suite', help='fuchsian-diamond, join, schottky-properness, cyclic ou schottky')
    verify.add_argument('--p', type=int, help='Dimensão p (suíte join)')
    verify.add_argument('--probes', type=int, help='Número de sondas aleatórias')
    return parser


if __name__ == "__main__":
    """Ponto de entrada da CLI."""
    parser = build_parser()
    args = parser.parse_args()

    try:
        if args.status_only:
            app = GeometryApplication()
            status = app.get_system_status()
            print("\nSTATUS DO SISTEMA:")
            print("=" * 40)
            print(f"Status Geral: {status['overall_status']}")
            for component, comp_status in status['components'].items():
                print(f"{component}: {comp_status.get('status', 'unknown')}")
            tools = status['components'].get('orchestrator', {}).get('tools', {})
            if tools:
                print(tabulate([[name, tool.get('status')] for name, tool in tools.items()], headers=['ferramenta', 'status']))
            sys.exit(0 if status['overall_status'] == 'healthy' else 1)

        if args.command is None:
            parser.error("informe um subcomando")

        exit_code = asyncio.run(main(args))
        sys.exit(exit_code)

    except SystemExit:
        raise
    except Exception as e:
        logger.error(f"Erro fatal: {str(e)}")
        sys.exit(1)
