"""
Logging estruturado do toolkit: console colorido e legível, arquivo JSON
por linha e arquivo separado de erros.
"""

import logging
import os
from datetime import datetime
from pathlib import Path

import numpy as np
import orjson
import structlog

from ..config.settings import settings

_LEVEL_STYLE = {
    'DEBUG': ('\033[36m', '·'),
    'INFO': ('\033[32m', '✓'),
    'WARNING': ('\033[33m', '!'),
    'ERROR': ('\033[31m', '✗'),
    'CRITICAL': ('\033[35m', '‼'),
}
_RESET = '\033[0m'
_DIM = '\033[2m'
_BOLD = '\033[1m'
_KEY = '\033[34m'


class ColorFormatter(logging.Formatter):
    """Linha única: hora, nível, componente e mensagem."""

    def format(self, record):
        color, mark = _LEVEL_STYLE.get(record.levelname, (_RESET, '•'))
        clock = datetime.fromtimestamp(record.created).strftime('%H:%M:%S')
        component = record.name.rsplit('.', 1)[-1]
        line = (
            f"{_DIM}{clock}{_RESET} {color}{mark} {record.levelname:<8}{_RESET} "
            f"{_BOLD}{component}{_RESET}: {record.getMessage()}"
        )
        if record.exc_info:
            line += f"\n{_DIM}{self.formatException(record.exc_info)}{_RESET}"
        return line


class StructuredConsoleRenderer:
    """Evento com campos de status em linha e números compactos entre colchetes."""

    INLINE_FIELDS = ('status', 'error', 'fixture', 'command', 'passed')
    HIDDEN_FIELDS = ('logger', 'extra', 'timestamp', 'level', 'execution_id', 'tool_id', 'tool_name')

    def __call__(self, logger, method_name, event_dict):
        event = str(event_dict.pop('event', ''))
        for key in self.HIDDEN_FIELDS:
            event_dict.pop(key, None)

        inline = [
            f"{_KEY}{key}{_RESET}={self._format_value(event_dict.pop(key))}"
            for key in self.INLINE_FIELDS if key in event_dict
        ]
        message = event + (f" ({', '.join(inline)})" if inline else '')

        numbers = [
            f"{key}={self._format_value(event_dict.pop(key))}"
            for key in list(event_dict)
            if isinstance(event_dict[key], (int, float, np.integer, np.floating))
        ]
        if numbers:
            message += f" {_DIM}[{', '.join(numbers)}]{_RESET}"

        for key, value in event_dict.items():
            message += f"\n  {_KEY}{key}{_RESET}: {self._format_value(value)}"
        return message

    @staticmethod
    def _format_value(value):
        if isinstance(value, (bool, np.bool_)):
            color = _LEVEL_STYLE['INFO'][0] if value else _LEVEL_STYLE['ERROR'][0]
            return f"{color}{bool(value)}{_RESET}"
        if isinstance(value, (float, np.floating)):
            return f"{float(value):.6g}"
        text = str(value)
        return text if len(text) <= 120 else text[:117] + '...'


def json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer, np.floating, np.bool_)):
        return value.item()
    return str(value)


class JSONFileRenderer:
    """Uma linha JSON por evento."""

    def __call__(self, logger, method_name, event_dict):
        return orjson.dumps(
            event_dict, default=json_default, option=orjson.OPT_SERIALIZE_NUMPY
        ).decode('utf-8')


def setup_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Configura os handlers do logger raiz e o structlog.

    Args:
        name: Nome do componente

    Returns:
        Logger configurado
    """
    log_file = Path(os.getenv('LOG_FILE', settings.system.log_file))
    error_file = Path(settings.system.error_log_file)
    log_file.parent.mkdir(exist_ok=True, parents=True)
    error_file.parent.mkdir(exist_ok=True, parents=True)

    level_name = os.getenv('LOG_LEVEL', settings.system.log_level.value).upper()
    level = getattr(logging, level_name, logging.INFO)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    for handler in root.handlers[:]:
        root.removeHandler(handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(processor=StructuredConsoleRenderer())
    )
    root.addHandler(console_handler)

    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(processor=JSONFileRenderer())
    )
    root.addHandler(file_handler)

    error_handler = logging.FileHandler(error_file, encoding='utf-8')
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(ColorFormatter())
    root.addHandler(error_handler)

    structlog.configure(
        processors=[
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    return structlog.get_logger(name)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Logger do componente (configuração feita por ``setup_logger``)."""
    return structlog.get_logger(name)


def log_execution_start(logger, operation: str, **kwargs):
    logger.info(f"Iniciando {operation}", operation=operation, **kwargs)


def log_execution_end(logger, operation: str, success: bool, execution_time: float, **kwargs):
    if success:
        logger.info(
            f"Concluído {operation}",
            operation=operation,
            status="sucesso",
            execution_time=round(execution_time, 3),
            **kwargs
        )
    else:
        logger.error(
            f"Falhou {operation}",
            operation=operation,
            status="falha",
            execution_time=round(execution_time, 3),
            **kwargs
        )


def log_bound(logger, check: str, value: float, bound: float, **kwargs):
    """Resultado de uma verificação numérica contra o seu limite."""
    passed = bool(value <= bound)
    method = logger.info if passed else logger.warning
    method(f"Verificação {check}", check=check, value=float(value), bound=float(bound), passed=passed, **kwargs)
    return passed


def log_sample_info(logger, description: str, **kwargs):
    logger.debug(description, **kwargs)
