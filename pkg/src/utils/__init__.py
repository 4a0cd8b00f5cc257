"""
Módulo de utilitários do toolkit de geometria AdS
"""

from .logger import setup_logger, get_logger
from .config import Config, RunConfig

__all__ = ['setup_logger', 'get_logger', 'Config', 'RunConfig']
