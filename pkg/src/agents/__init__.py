"""
Agentes: orquestração das execuções da CLI
"""

from .base_agent import BaseAgent
from .orchestrator import EXIT_FAILED_BOUND, EXIT_INPUT_ERROR, EXIT_OK, GeometryOrchestrator

__all__ = ['BaseAgent', 'GeometryOrchestrator', 'EXIT_OK', 'EXIT_FAILED_BOUND', 'EXIT_INPUT_ERROR']
