"""
Enumeração de palavras, amostra do conjunto limite e certificado de negatividade
"""

from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..config.settings import settings
from ..geometry.errors import InconsistentLiftError
from ..geometry.groups import boost_element
from ..geometry.limit_sets import (
    GroupPresentation,
    LimitSetSample,
    approximate_limit_set,
    certify_negative,
    lift_acausal,
)
from ..utils.logger import get_logger, log_sample_info
from .base_tool import BaseTool

logger = get_logger(__name__)


def sample_frame(sample: LimitSetSample) -> pd.DataFrame:
    """Uma linha por ponto: palavra, gap, representante e (se houver) levantamento."""
    data: Dict[str, Any] = {'index': np.arange(len(sample))}
    if sample.source_words:
        data['word'] = list(sample.source_words)
    if sample.gaps is not None:
        data['gap'] = sample.gaps
    for column in range(sample.dim):
        data[f'p{column}'] = sample.representatives[:, column]
    if sample.has_lift:
        data['t'] = sample.lift_ts
        for column in range(sample.lift_xs.shape[1]):
            data[f'x{column}'] = sample.lift_xs[:, column]
    return pd.DataFrame(data)


class LimitSetTool(BaseTool):
    """Amostra Λ de uma apresentação e tenta levantá-la acausalmente."""

    def __init__(self):
        super().__init__("LimitSetTool")

    async def sample_limit_set(
        self,
        presentation: GroupPresentation,
        max_len: int,
        gap_min: Optional[float] = None,
        dedupe_radius: Optional[float] = None,
        budget: Optional[int] = None
    ) -> Dict[str, Any]:
        """
        Returns:
            Dict com ``sample`` (levantada quando negativa), ``negativity``,
            ``frame`` e métricas da amostra

        Erros de entrada (max_len 0, nenhum gap suficiente) voltam com
        ``input_error=True``.
        """
        params = {'max_len': max_len, 'rank': presentation.rank, 'dim': presentation.dim}

        async def body() -> Dict[str, Any]:
            sample = approximate_limit_set(presentation, max_len, gap_min, dedupe_radius, budget=budget)
            log_sample_info(
                self.logger, "Amostra do conjunto limite",
                points=len(sample), invariance_residual=sample.invariance_residual
            )

            negativity = None
            lifted = False
            if len(sample) >= 2:
                negativity = certify_negative(sample)
                if negativity.negative:
                    try:
                        sample = lift_acausal(sample)
                        lifted = True
                    except InconsistentLiftError as exc:
                        self.logger.warning("Levantamento acausal falhou", error=str(exc))

            return {
                'sample': sample,
                'frame': sample_frame(sample),
                'points': len(sample),
                'invariance_residual': sample.invariance_residual,
                'negative': bool(negativity.negative) if negativity else None,
                'worst_pair': negativity.worst_pair if negativity else None,
                'worst_value': negativity.worst_value if negativity else None,
                'lifted': lifted,
                'summary': f"{len(sample)} pontos, negativo={negativity.negative if negativity else None}",
            }

        return await self.run_logged("sample_limit_set", params, body)

    def health_check(self) -> Dict[str, Any]:
        try:
            presentation = GroupPresentation((boost_element(3.0, 1.0, settings.sampling.default_n),))
            sample = approximate_limit_set(presentation, 6)
            return {
                'status': 'healthy' if len(sample) == 2 else 'degraded',
                'cyclic_points': len(sample),
                'stats': self.get_tool_stats(),
            }
        except Exception as exc:
            return {'status': 'error', 'error': str(exc)}
