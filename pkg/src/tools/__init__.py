"""
Ferramentas de alto nível usadas pelo orquestrador e pela CLI
"""

from .base_tool import BaseTool
from .cartan_tool import CartanTool
from .domain_tool import DomainTool
from .geodesics_tool import GeodesicsTool
from .limit_set_tool import LimitSetTool
from .mesh_tool import MeshTool
from .verify_tool import SUITES, VerifyTool

__all__ = [
    'BaseTool',
    'CartanTool',
    'DomainTool',
    'GeodesicsTool',
    'LimitSetTool',
    'MeshTool',
    'VerifyTool',
    'SUITES',
]
