"""
Configuração de execução: variáveis do .env e parâmetros de uma chamada da CLI
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from ..config.settings import settings

COMMANDS = ('cartan', 'limitset', 'domain', 'geodesics', 'verify', 'export-mesh')
VERIFY_SUITES = ('fuchsian-diamond', 'join', 'schottky-properness', 'cyclic', 'schottky')
FIXTURES = ('cyclic', 'schottky', 'fuchsian', 'join')


class Config:
    """Valores padrão do ambiente (.env) usados pela CLI."""

    def __init__(self):
        load_dotenv()

        self._config = {
            'LOG_LEVEL': os.getenv('LOG_LEVEL', settings.system.log_level.value),
            'LOG_FILE': os.getenv('LOG_FILE', settings.system.log_file),
            'ADS_N': int(os.getenv('ADS_N', str(settings.sampling.default_n))),
            'ADS_MAX_LEN': int(os.getenv('ADS_MAX_LEN', str(settings.sampling.max_len))),
            'ADS_MESH': float(os.getenv('ADS_MESH', str(settings.domain.mesh))),
            'ADS_SEED': int(os.getenv('ADS_SEED', str(settings.sampling.seed))),
            'ADS_OUTPUT_DIR': os.getenv('ADS_OUTPUT_DIR', str(settings.export.output_dir)),
            'ADS_WORD_BUDGET': int(os.getenv('ADS_WORD_BUDGET', str(settings.sampling.word_budget))),
        }

    def get(self, key: str, default: Any = None) -> Any:
        return self._config.get(key, default)

    def is_valid(self) -> Dict[str, Any]:
        """Verifica os valores padrão do ambiente."""
        status = {'status': 'healthy', 'issues': []}

        if self._config['ADS_N'] < 2:
            status['issues'].append(f"ADS_N inválido: {self._config['ADS_N']}")
            status['status'] = 'error'

        if self._config['ADS_MESH'] <= 0:
            status['issues'].append(f"ADS_MESH deve ser positivo: {self._config['ADS_MESH']}")
            status['status'] = 'error'

        output_dir = Path(self._config['ADS_OUTPUT_DIR'])
        if output_dir.exists() and not output_dir.is_dir():
            status['issues'].append(f"ADS_OUTPUT_DIR não é diretório: {output_dir}")
            status['status'] = 'error'

        return status

    def get_summary(self) -> Dict[str, Any]:
        return {
            'n': self._config['ADS_N'],
            'max_len': self._config['ADS_MAX_LEN'],
            'mesh': self._config['ADS_MESH'],
            'seed': self._config['ADS_SEED'],
            'output_dir': self._config['ADS_OUTPUT_DIR'],
            'log_level': self._config['LOG_LEVEL'],
        }


@dataclass
class RunConfig:
    """Parâmetros de uma execução da CLI."""
    command: str
    n: int = field(default_factory=lambda: settings.sampling.default_n)
    max_len: int = field(default_factory=lambda: settings.sampling.max_len)
    mesh: float = field(default_factory=lambda: settings.domain.mesh)
    seed: int = field(default_factory=lambda: settings.sampling.seed)
    output_dir: Path = field(default_factory=lambda: settings.export.output_dir)
    input_path: Optional[Path] = None
    fixture: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_env(cls, command: str, **overrides) -> 'RunConfig':
        """Padrões do ambiente sobrescritos pelos argumentos não nulos."""
        env = Config()
        values = {
            'n': env.get('ADS_N'),
            'max_len': env.get('ADS_MAX_LEN'),
            'mesh': env.get('ADS_MESH'),
            'seed': env.get('ADS_SEED'),
            'output_dir': Path(env.get('ADS_OUTPUT_DIR')),
        }
        given = {key: value for key, value in overrides.items() if value is not None}
        values.update(given)
        options = dict(values.pop('options', None) or {})
        options.setdefault('overrides', sorted(key for key in given if key != 'options'))
        values['options'] = options
        if values.get('input_path') is not None:
            values['input_path'] = Path(values['input_path'])
        values['output_dir'] = Path(values['output_dir'])
        return cls(command=command, **values)

    def validate(self) -> List[str]:
        """Lista de erros de entrada (vazia se a configuração é válida)."""
        errors = []
        if self.command not in COMMANDS:
            errors.append(f"Comando desconhecido: {self.command}")
        if self.n < 2:
            errors.append(f"n deve ser >= 2: {self.n}")
        if self.mesh <= 0:
            errors.append(f"mesh deve ser positivo: {self.mesh}")
        if self.max_len < 0:
            errors.append(f"max_len negativo: {self.max_len}")
        if self.command == 'verify' and self.fixture not in VERIFY_SUITES:
            errors.append(f"Suíte desconhecida: {self.fixture} (opções: {', '.join(VERIFY_SUITES)})")
        if self.command != 'verify' and self.fixture is not None and self.fixture not in FIXTURES:
            errors.append(f"Exemplo desconhecido: {self.fixture} (opções: {', '.join(FIXTURES)})")
        if self.command == 'cartan' and self.input_path is None:
            errors.append("cartan exige um arquivo de matrizes")
        if self.input_path is not None and not self.input_path.exists():
            errors.append(f"Arquivo não encontrado: {self.input_path}")
        return errors

    def overridden(self, key: str) -> bool:
        """Verdadeiro se o valor veio da linha de comando."""
        return key in self.options.get('overrides', ())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'n': self.n,
            'max_len': self.max_len,
            'mesh': self.mesh,
            'seed': self.seed,
            'output_dir': str(self.output_dir),
            'input_path': str(self.input_path) if self.input_path else None,
            'fixture': self.fixture,
        }
