"""
Módulo de configurações do toolkit de geometria AdS
"""

from .settings import settings, GeometrySettings

__all__ = ['settings', 'GeometrySettings']
