"""
Validação das entradas em arquivo: matrizes e arquivos de geradores
"""

from typing import Any, Dict, List

import numpy as np

from ..utils.logger import get_logger

logger = get_logger(__name__)

BASIS_NAMES = ('diagonal', 'split')
RELATION_HINTS = ('free', 'unknown')


class InputValidator:
    """
    Verificações estruturais antes de qualquer cálculo: forma, finitude e
    esquema do JSON de geradores. A pertinência a O(2,n) fica com
    ``geometry.groups.validate``.
    """

    def __init__(self):
        self.validation_stats = {
            'total_validations': 0,
            'passed_validations': 0,
            'failed_validations': 0,
        }

    def _record(self, issues: List[str]) -> List[str]:
        self.validation_stats['total_validations'] += 1
        key = 'failed_validations' if issues else 'passed_validations'
        self.validation_stats[key] += 1
        if issues:
            logger.warning("Entrada rejeitada", issues=issues)
        return issues

    def validate_matrix(self, matrix: np.ndarray, label: str = "matriz") -> List[str]:
        """
        Args:
            matrix: Matriz lida do arquivo
            label: Nome usado nas mensagens

        Returns:
            Lista de problemas (vazia se a matriz é aceitável)
        """
        issues = []
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            issues.append(f"{label}: não quadrada (shape {matrix.shape})")
        elif matrix.shape[0] < 4:
            issues.append(f"{label}: dimensão {matrix.shape[0]} < 4")
        if matrix.size and not np.all(np.isfinite(matrix)):
            issues.append(f"{label}: entradas não finitas")
        return self._record(issues)

    def validate_matrices(self, matrices: List[np.ndarray]) -> List[str]:
        if not matrices:
            return self._record(["Arquivo sem matrizes"])
        issues = []
        for index, matrix in enumerate(matrices):
            issues.extend(self.validate_matrix(matrix, f"matriz {index + 1}"))
        return issues

    def validate_generator_payload(self, payload: Any) -> List[str]:
        """
        Esquema ``{"basis", "relation_hint", "generators"}`` com geradores
        em ordem de linhas, todos do mesmo tamanho (n+2)².
        """
        if not isinstance(payload, dict):
            return self._record(["Arquivo de geradores deve conter um objeto JSON"])

        issues = []
        basis = payload.get('basis', 'diagonal')
        if basis not in BASIS_NAMES:
            issues.append(f"basis inválida: {basis!r} (opções: {', '.join(BASIS_NAMES)})")
        hint = payload.get('relation_hint', 'free')
        if hint not in RELATION_HINTS:
            issues.append(f"relation_hint inválido: {hint!r} (opções: {', '.join(RELATION_HINTS)})")

        generators = payload.get('generators')
        if not isinstance(generators, list) or not generators:
            issues.append("generators deve ser uma lista não vazia")
            return self._record(issues)

        sizes = set()
        for index, entries in enumerate(generators):
            if not isinstance(entries, list) or not all(
                isinstance(value, (int, float)) and not isinstance(value, bool) for value in entries
            ):
                issues.append(f"gerador {index + 1}: lista de números esperada")
                continue
            side = int(round(np.sqrt(len(entries))))
            if side * side != len(entries) or side < 4:
                issues.append(f"gerador {index + 1}: {len(entries)} entradas não formam matriz (n+2)² com n >= 2")
            sizes.add(len(entries))
        if len(sizes) > 1:
            issues.append(f"Geradores com tamanhos diferentes: {sorted(sizes)}")
        return self._record(issues)

    def get_validation_summary(self) -> Dict[str, Any]:
        return dict(self.validation_stats)
