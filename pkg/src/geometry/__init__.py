"""
Núcleo numérico: formas de ℝ^{2,n}, o grupo O(2,n), modelos de Ein_{1,n},
causalidade, conjuntos limite, domínio invisível e geodésicas causais.
"""

from .core_forms import FormBasis, form_inner
from .errors import GeometryError
from .groups import GroupElement, cartan_decompose, validate
from .invisible_domain import InvisibleDomain
from .limit_sets import GroupPresentation, LimitSetSample, approximate_limit_set

__all__ = [
    'FormBasis',
    'form_inner',
    'GeometryError',
    'GroupElement',
    'cartan_decompose',
    'validate',
    'InvisibleDomain',
    'GroupPresentation',
    'LimitSetSample',
    'approximate_limit_set',
]
