"""
Decomposição de Cartan de matrizes lidas de arquivo
"""

from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from ..config.settings import settings
from ..geometry.core_forms import FormBasis
from ..geometry.errors import AmbiguousPolesError
from ..geometry.groups import identity, is_identity_component, p1_data, validate
from ..utils.logger import get_logger
from .base_tool import BaseTool

logger = get_logger(__name__)


class CartanTool(BaseTool):
    """
    g = k·a(λ, μ)·l para cada matriz, com resíduo da forma, erro de
    reconstrução e polos quando o gap λ − μ é positivo.
    """

    def __init__(self):
        super().__init__("CartanTool")

    def _row(self, index: int, matrix: np.ndarray, basis: FormBasis) -> Dict[str, Any]:
        g = validate(matrix, basis)
        factors = g.cartan
        lam, mu = factors.a_exponents
        error = float(np.linalg.norm(factors.reconstruct() - g.diagonal) / np.linalg.norm(g.diagonal))
        row = {
            'index': index,
            'n': g.n,
            'lambda': lam,
            'mu': mu,
            'gap': lam - mu,
            'form_residual': g.form_residual,
            'reconstruction_error': error,
            'identity_component': is_identity_component(g),
        }
        try:
            poles = p1_data(g)
            row['p_plus'] = ' '.join(settings.export.float_format % v for v in poles.p_plus.representative)
            row['p_minus'] = ' '.join(settings.export.float_format % v for v in poles.p_minus.representative)
        except AmbiguousPolesError:
            row['p_plus'] = row['p_minus'] = ''
        return row

    async def decompose(self, matrices: Sequence[np.ndarray], basis: FormBasis = FormBasis.DIAGONAL) -> Dict[str, Any]:
        """
        Args:
            matrices: Matrizes (n+2)×(n+2)
            basis: Base em que as matrizes estão escritas

        Returns:
            Dict com ``frame`` (uma linha por matriz) e ``summary``
        """
        async def body() -> Dict[str, Any]:
            rows: List[Dict[str, Any]] = [
                self._row(index, np.asarray(matrix, dtype=float), basis)
                for index, matrix in enumerate(matrices)
            ]
            frame = pd.DataFrame(rows)
            return {
                'frame': frame,
                'count': len(rows),
                'max_reconstruction_error': float(frame['reconstruction_error'].max()) if rows else 0.0,
                'summary': f"{len(rows)} matrizes decompostas",
            }

        return await self.run_logged("decompose", {'count': len(matrices), 'basis': basis.value}, body)

    def health_check(self) -> Dict[str, Any]:
        try:
            lam, mu = identity(settings.sampling.default_n).cartan.a_exponents
            healthy = abs(lam) < 1e-12 and abs(mu) < 1e-12
            return {
                'status': 'healthy' if healthy else 'error',
                'identity_exponents': (lam, mu),
                'stats': self.get_tool_stats(),
            }
        except Exception as exc:
            return {'status': 'error', 'error': str(exc)}
