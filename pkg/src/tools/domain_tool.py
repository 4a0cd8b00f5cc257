"""
Construção de Ω(Λ), grades de f± e rótulos de região
"""

from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from ..config.settings import settings
from ..geometry.invisible_domain import InvisibleDomain, boundary_grid
from ..geometry.limit_sets import LimitSetSample, sample_from_universal
from ..utils.logger import get_logger
from .base_tool import BaseTool

logger = get_logger(__name__)

# Alturas relativas em [f⁻, f⁺]; os extremos caem fora de Ω.
TIME_LEVELS = (-0.1, 0.1, 0.3, 0.5, 0.7, 0.9, 1.1)


def _coordinate_columns(xs: np.ndarray) -> Dict[str, np.ndarray]:
    return {f'x{column}': xs[:, column] for column in range(xs.shape[1])}


class DomainTool(BaseTool):
    """Avalia o domínio invisível numa grade de S^n."""

    def __init__(self):
        super().__init__("DomainTool")

    async def build_domain(self, sample: LimitSetSample, mesh: Optional[float] = None) -> Dict[str, Any]:
        async def body() -> Dict[str, Any]:
            domain = InvisibleDomain.build(sample, mesh)
            low, high = domain.time_window()
            return {
                'domain': domain,
                'n': domain.n,
                'mesh': domain.mesh,
                'time_window': (low, high),
                'summary': f"Ω com {len(domain.sample)} pontos de Λ",
            }

        return await self.run_logged("build_domain", {'points': len(sample)}, body)

    async def export_grids(
        self,
        domain: InvisibleDomain,
        grid_size: Optional[int] = None,
        levels: Sequence[float] = TIME_LEVELS
    ) -> Dict[str, Any]:
        """
        Returns:
            Dict com ``envelopes`` (x, f⁺, f⁻, componente) e ``regions``
            (x, t, rótulo futuro, rótulo passado)
        """
        grid_size = settings.domain.boundary_grid_size if grid_size is None else grid_size

        async def body() -> Dict[str, Any]:
            xs = boundary_grid(domain.n + 1, grid_size)
            f_plus = domain.f_plus(xs)
            f_minus = domain.f_minus(xs)
            components = [component.value for component in domain.component_array(xs)]

            envelopes = pd.DataFrame({
                **_coordinate_columns(xs),
                'f_plus': f_plus,
                'f_minus': f_minus,
                'width': f_plus - f_minus,
                'component': components,
            })

            level_array = np.asarray(levels, dtype=float)
            grid_xs = np.repeat(xs, level_array.size, axis=0)
            grid_ts = (f_minus[:, None] + np.outer(f_plus - f_minus, level_array)).reshape(-1)
            regions = domain.classify_grid(grid_xs, grid_ts)
            region_frame = pd.DataFrame({
                **_coordinate_columns(grid_xs),
                't': grid_ts,
                'label': [label.value for label in regions.labels],
                'past_label': [label.value if label else '' for label in regions.past_labels],
            })

            counts = regions.counts()
            return {
                'envelopes': envelopes,
                'regions': region_frame,
                'label_counts': counts,
                'boundary_empty': regions.boundary_empty,
                'max_width': float(np.max(f_plus - f_minus)),
                'summary': ', '.join(f"{key}={value}" for key, value in sorted(counts.items())),
            }

        return await self.run_logged("export_grids", {'grid_size': grid_size, 'levels': len(levels)}, body)

    def health_check(self) -> Dict[str, Any]:
        try:
            n = settings.sampling.default_n
            xs = boundary_grid(n, 8)
            domain = InvisibleDomain.build(sample_from_universal(xs, np.zeros(8)), settings.domain.mesh)
            pole = np.zeros(n + 1)
            pole[-1] = 1.0
            value = float(domain.f_plus(pole[None, :])[0])
            return {
                'status': 'healthy' if abs(value - np.pi / 2.0) < 1e-9 else 'degraded',
                'f_plus_pole': value,
                'stats': self.get_tool_stats(),
            }
        except Exception as exc:
            return {'status': 'error', 'error': str(exc)}
