"""
Classe base das ferramentas de geometria (cartan, limitset, domain, ...)
"""

from abc import ABC, abstractmethod
from datetime import datetime
from typing import Any, Awaitable, Callable, Dict, Optional
import uuid

from ..geometry.errors import GeometryError
from ..utils.logger import get_logger


class BaseTool(ABC):
    """
    Ferramenta com ciclo de execução registrado: id por execução,
    contadores de sucesso/falha e tempo médio.
    """

    def __init__(self, tool_name: str):
        self.tool_name = tool_name
        self.tool_id = str(uuid.uuid4())
        self.created_at = datetime.now()
        self.usage_count = 0
        self.last_used: Optional[datetime] = None

        self.logger = get_logger(f"tool.{tool_name}")

        self.execution_stats = {
            'total_executions': 0,
            'successful_executions': 0,
            'failed_executions': 0,
            'average_execution_time': 0.0,
            'last_execution_time': None,
        }

        self.logger.debug(f"Ferramenta {tool_name} pronta", tool_id=self.tool_id)

    def log_execution_start(self, operation: str, params: Dict[str, Any]) -> str:
        """
        Registra o início de uma operação.

        Returns:
            ID da execução
        """
        execution_id = str(uuid.uuid4())
        self.logger.info(
            f"Iniciando {operation}",
            execution_id=execution_id,
            operation=operation,
            **{key: value for key, value in params.items() if isinstance(value, (int, float, str, bool))}
        )
        self.usage_count += 1
        self.last_used = datetime.now()
        return execution_id

    def log_execution_end(
        self,
        execution_id: str,
        success: bool,
        execution_time: float,
        result_summary: Optional[str] = None,
        error: Optional[str] = None
    ) -> None:
        stats = self.execution_stats
        stats['total_executions'] += 1
        stats['successful_executions' if success else 'failed_executions'] += 1

        total = stats['total_executions']
        stats['average_execution_time'] = (
            stats['average_execution_time'] * (total - 1) + execution_time
        ) / total
        stats['last_execution_time'] = execution_time

        if success:
            self.logger.info(
                "Execução concluída",
                execution_id=execution_id,
                status="sucesso",
                execution_time=round(execution_time, 3),
                summary=result_summary,
            )
        else:
            self.logger.error(
                "Execução falhou",
                execution_id=execution_id,
                status="falha",
                execution_time=round(execution_time, 3),
                error=error,
            )

    async def run_logged(
        self,
        operation: str,
        params: Dict[str, Any],
        body: Callable[[], Awaitable[Dict[str, Any]]],
    ) -> Dict[str, Any]:
        """
        Executa ``body`` entre os registros de início e fim.

        Erros de entrada (``ValueError``, ``GeometryError``, arquivos) são
        devolvidos no resultado com ``success=False`` e ``input_error=True``;
        qualquer outra exceção é propagada.
        """
        execution_id = self.log_execution_start(operation, params)
        start_time = datetime.now()
        try:
            result = await body()
        except (ValueError, GeometryError, OSError) as exc:
            elapsed = (datetime.now() - start_time).total_seconds()
            self.log_execution_end(execution_id, False, elapsed, error=str(exc))
            return {
                'success': False,
                'input_error': True,
                'error': str(exc),
                'error_type': type(exc).__name__,
                'execution_time': elapsed,
            }
        except Exception as exc:
            elapsed = (datetime.now() - start_time).total_seconds()
            self.log_execution_end(execution_id, False, elapsed, error=str(exc))
            raise

        elapsed = (datetime.now() - start_time).total_seconds()
        result.setdefault('success', True)
        result['execution_time'] = elapsed
        self.log_execution_end(
            execution_id, result['success'], elapsed,
            result_summary=result.get('summary'),
            error=None if result['success'] else result.get('error', 'verificação reprovada'),
        )
        return result

    def get_tool_stats(self) -> Dict[str, Any]:
        total = self.execution_stats['total_executions']
        success_rate = (
            self.execution_stats['successful_executions'] / total * 100 if total else 0.0
        )
        return {
            'tool_name': self.tool_name,
            'tool_id': self.tool_id,
            'created_at': self.created_at.isoformat(),
            'usage_count': self.usage_count,
            'last_used': self.last_used.isoformat() if self.last_used else None,
            'execution_stats': dict(self.execution_stats),
            'success_rate_percent': round(success_rate, 2),
            'uptime_seconds': (datetime.now() - self.created_at).total_seconds(),
        }

    @abstractmethod
    def health_check(self) -> Dict[str, Any]:
        """Verificação rápida com uma entrada conhecida."""
