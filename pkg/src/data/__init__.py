"""
Entrada e saída de arquivos e validação das entradas
"""

from .processor import GeometryDataIO
from .validator import InputValidator

__all__ = ['GeometryDataIO', 'InputValidator']
