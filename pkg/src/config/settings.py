import os
from typing import Dict, Any, Optional
from enum import Enum
from dataclasses import dataclass
from pathlib import Path

class LogLevel(Enum):
    """Níveis de log disponíveis."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"

@dataclass
class NumericsSettings:
    """Tolerâncias numéricas usadas pelos núcleos geométricos."""
    form_tolerance: float = 1e-9          # ‖gᵀJg − J‖ relativo
    degeneracy_tolerance: float = 1e-9    # autovalores nulos / posto
    lightlike_band: float = 1e-7          # banda tipo-luz (radianos)
    canonical_zero_band: float = 1e-12    # canonicalização de sinal
    ambiguous_gap: float = 1e-9           # λ − μ abaixo disso: polos ambíguos
    proximal_gap: float = 25.0            # sequência numericamente P₁-divergente
    boundary_band: float = 1e-9           # |última coordenada| no equador
    dedupe_matrix_radius: float = 1e-8    # identificação de elementos (relação Unknown)
    cartan_tolerance: float = 1e-8        # reconstrução k·a·l relativa

@dataclass
class SamplingSettings:
    """Configurações de enumeração de palavras e amostragem de conjuntos limite."""
    default_n: int = 2
    max_len: int = 8
    word_budget: int = 200_000
    gap_min: float = 10.0
    dedupe_radius: float = 1e-4
    power_iterations: int = 6
    seed: int = 20240611

@dataclass
class DomainSettings:
    """Configurações do domínio invisível, regiões e geodésicas."""
    mesh: float = 0.02
    horizon_band_factor: float = 2.0
    boundary_grid_size: int = 1024
    probe_count: int = 10_000
    geodesic_samples: int = 2048
    clearance: float = 1e-2
    chunk_size: int = 256

@dataclass
class ExportSettings:
    """Configurações dos arquivos exportados."""
    output_dir: Path = Path("output")
    float_format: str = "%.12g"
    mesh_rings: int = 48
    mesh_sectors: int = 96
    csv_encoding: str = "utf-8"

@dataclass
class SystemSettings:
    """Configurações gerais do sistema."""

    # Informações da aplicação
    app_name: str = "AdS Geometry Toolkit"
    app_version: str = "1.0.0"

    # Diretórios do sistema
    base_dir: Path = Path(".")
    logs_dir: Path = Path("logs")

    # Configurações de logging
    log_level: LogLevel = LogLevel.INFO
    log_file: str = "logs/ads_geometry.log"
    error_log_file: str = "logs/ads_geometry_errors.log"

    def __post_init__(self):
        """Criar diretório de logs após inicialização."""
        self.logs_dir.mkdir(exist_ok=True, parents=True)

class GeometrySettings:
    """Classe principal para gerenciar todas as configurações do sistema."""

    def __init__(self):
        """Inicializa todas as configurações."""
        self.system = SystemSettings()
        self.numerics = NumericsSettings()
        self.sampling = SamplingSettings()
        self.domain = DomainSettings()
        self.export = ExportSettings()

        # Aplicar configurações do ambiente se disponível
        self._load_environment_settings()

    def _load_environment_settings(self):
        """Carrega configurações das variáveis de ambiente."""

        if os.getenv('LOG_LEVEL'):
            try:
                self.system.log_level = LogLevel(os.getenv('LOG_LEVEL').upper())
            except ValueError:
                pass

        if os.getenv('LOG_FILE'):
            self.system.log_file = os.getenv('LOG_FILE')

        # Amostragem
        if os.getenv('ADS_N'):
            try:
                self.sampling.default_n = int(os.getenv('ADS_N'))
            except ValueError:
                pass

        if os.getenv('ADS_MAX_LEN'):
            try:
                self.sampling.max_len = int(os.getenv('ADS_MAX_LEN'))
            except ValueError:
                pass

        if os.getenv('ADS_WORD_BUDGET'):
            try:
                self.sampling.word_budget = int(os.getenv('ADS_WORD_BUDGET'))
            except ValueError:
                pass

        if os.getenv('ADS_GAP_MIN'):
            try:
                self.sampling.gap_min = float(os.getenv('ADS_GAP_MIN'))
            except ValueError:
                pass

        if os.getenv('ADS_SEED'):
            try:
                self.sampling.seed = int(os.getenv('ADS_SEED'))
            except ValueError:
                pass

        # Domínio
        if os.getenv('ADS_MESH'):
            try:
                self.domain.mesh = float(os.getenv('ADS_MESH'))
            except ValueError:
                pass

        if os.getenv('ADS_GEODESIC_SAMPLES'):
            try:
                self.domain.geodesic_samples = int(os.getenv('ADS_GEODESIC_SAMPLES'))
            except ValueError:
                pass

        # Exportação
        if os.getenv('ADS_OUTPUT_DIR'):
            self.export.output_dir = Path(os.getenv('ADS_OUTPUT_DIR'))

    def get_summary(self) -> Dict[str, Any]:
        """Retorna resumo das configurações."""
        return {
            'app_name': self.system.app_name,
            'app_version': self.system.app_version,
            'log_level': self.system.log_level.value,
            'default_n': self.sampling.default_n,
            'max_len': self.sampling.max_len,
            'word_budget': self.sampling.word_budget,
            'mesh': self.domain.mesh,
            'seed': self.sampling.seed,
            'output_dir': str(self.export.output_dir)
        }

    def validate_settings(self) -> Dict[str, Any]:
        """Valida se todas as configurações estão corretas."""
        validation_result = {
            'valid': True,
            'errors': [],
            'warnings': []
        }

        if self.sampling.default_n < 2:
            validation_result['errors'].append(
                f"Dimensão inválida: n={self.sampling.default_n} (mínimo 2)"
            )
            validation_result['valid'] = False

        if self.domain.mesh <= 0:
            validation_result['errors'].append(
                f"Malha deve ser positiva: {self.domain.mesh}"
            )
            validation_result['valid'] = False

        if self.sampling.max_len < 0:
            validation_result['errors'].append(
                f"Comprimento máximo de palavra negativo: {self.sampling.max_len}"
            )
            validation_result['valid'] = False

        if self.sampling.gap_min < 1.0:
            validation_result['warnings'].append(
                "gap_min muito baixo, polos podem ficar imprecisos"
            )

        if self.sampling.max_len > 12:
            validation_result['warnings'].append(
                "max_len muito alto, enumeração pode ser lenta"
            )

        if self.domain.mesh > 0.1:
            validation_result['warnings'].append(
                "Malha grossa: bandas de horizonte e de fronteira ficam largas"
            )

        return validation_result

    def to_dict(self) -> Dict[str, Any]:
        """Converte configurações para dicionário."""
        return {
            'system': {
                'app_name': self.system.app_name,
                'app_version': self.system.app_version,
                'log_level': self.system.log_level.value
            },
            'numerics': {
                'form_tolerance': self.numerics.form_tolerance,
                'degeneracy_tolerance': self.numerics.degeneracy_tolerance,
                'lightlike_band': self.numerics.lightlike_band,
                'ambiguous_gap': self.numerics.ambiguous_gap,
                'proximal_gap': self.numerics.proximal_gap
            },
            'sampling': {
                'default_n': self.sampling.default_n,
                'max_len': self.sampling.max_len,
                'word_budget': self.sampling.word_budget,
                'gap_min': self.sampling.gap_min,
                'dedupe_radius': self.sampling.dedupe_radius,
                'seed': self.sampling.seed
            },
            'domain': {
                'mesh': self.domain.mesh,
                'horizon_band_factor': self.domain.horizon_band_factor,
                'geodesic_samples': self.domain.geodesic_samples,
                'clearance': self.domain.clearance
            },
            'export': {
                'output_dir': str(self.export.output_dir),
                'float_format': self.export.float_format
            }
        }

# Instância global das configurações
settings = GeometrySettings()

# Constantes úteis
FORM_TOLERANCE = settings.numerics.form_tolerance
LIGHTLIKE_BAND = settings.numerics.lightlike_band
CANONICAL_ZERO_BAND = settings.numerics.canonical_zero_band

# Funções utilitárias
def get_output_path(filename: Optional[str] = None) -> Path:
    """Retorna caminho no diretório de saída (criando o diretório)."""
    output_dir = settings.export.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir / filename if filename else output_dir

def default_horizon_band(mesh: Optional[float] = None) -> float:
    """Banda de horizonte padrão: fator × malha."""
    mesh = settings.domain.mesh if mesh is None else mesh
    return settings.domain.horizon_band_factor * mesh
