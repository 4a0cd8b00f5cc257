"""
Toolkit de geometria anti-de Sitter e do universo de Einstein
Decomposição de Cartan em O(2,n), conjuntos limite, domínio invisível Ω
e espaço de geodésicas causais
"""

__version__ = "1.0.0"
__description__ = "Geometria AdS/Einstein: Cartan, Λ, Ω e geodésicas causais"
