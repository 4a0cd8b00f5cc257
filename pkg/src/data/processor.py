"""
Leitura e escrita dos arquivos do toolkit: matrizes em texto, geradores em
JSON, grades em CSV, relatórios em JSON e malhas OBJ.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import orjson
import pandas as pd

from ..config.settings import settings
from ..geometry.core_forms import FormBasis
from ..geometry.groups import validate
from ..geometry.limit_sets import GroupPresentation, RelationHint
from ..utils.logger import json_default, get_logger
from .validator import InputValidator

logger = get_logger(__name__)

PathLike = Union[str, Path]
Surface = Tuple[np.ndarray, np.ndarray]


class GeometryDataIO:
    """
    Entrada e saída em arquivos de texto.

    Formatos:
    - Matrizes: UTF-8, uma linha por linha da matriz, ``#`` inicia comentário,
      linha em branco separa matrizes
    - Geradores: ``{"basis", "relation_hint", "generators"}``
    - CSV com ``float_format`` fixo (saída idêntica para entrada idêntica)
    """

    def __init__(self, output_dir: Optional[PathLike] = None):
        self.output_dir = Path(output_dir) if output_dir is not None else Path(settings.export.output_dir)
        self.validator = InputValidator()
        self.io_stats = {
            'matrices_loaded': 0,
            'generator_files_loaded': 0,
            'files_written': 0,
            'bytes_written': 0,
        }

    # ------------------------------------------------------------------
    # Leitura
    # ------------------------------------------------------------------

    @staticmethod
    def _matrix_blocks(text: str) -> List[List[str]]:
        """Linhas de dados agrupadas por linhas em branco (comentários não separam)."""
        blocks: List[List[str]] = []
        current: List[str] = []
        for raw in text.splitlines():
            if not raw.strip():
                if current:
                    blocks.append(current)
                    current = []
                continue
            data = raw.split('#', 1)[0].strip()
            if data:
                current.append(data)
        if current:
            blocks.append(current)
        return blocks

    def load_matrices(self, file_path: PathLike) -> List[np.ndarray]:
        """
        Lê as matrizes de um arquivo texto.

        Raises:
            FileNotFoundError: Arquivo inexistente
            ValueError: Conteúdo não numérico ou matrizes malformadas
        """
        path = Path(file_path)
        text = path.read_text(encoding='utf-8')

        matrices = []
        for index, block in enumerate(self._matrix_blocks(text)):
            try:
                matrices.append(np.loadtxt(block, dtype=float, ndmin=2))
            except ValueError as exc:
                raise ValueError(f"Matriz {index + 1} de {path.name}: {exc}") from exc

        issues = self.validator.validate_matrices(matrices)
        if issues:
            raise ValueError("; ".join(issues))

        self.io_stats['matrices_loaded'] += len(matrices)
        logger.debug("Matrizes carregadas", file=str(path), count=len(matrices))
        return matrices

    def load_generators(self, file_path: PathLike) -> GroupPresentation:
        """
        Lê e valida um arquivo de geradores.

        Raises:
            FileNotFoundError: Arquivo inexistente
            ValueError: JSON inválido, esquema incorreto ou matriz fora de O(2,n)
        """
        path = Path(file_path)
        try:
            payload = orjson.loads(path.read_bytes())
        except orjson.JSONDecodeError as exc:
            raise ValueError(f"JSON inválido em {path.name}: {exc}") from exc

        issues = self.validator.validate_generator_payload(payload)
        if issues:
            raise ValueError("; ".join(issues))

        basis = FormBasis(payload.get('basis', 'diagonal'))
        hint = RelationHint(payload.get('relation_hint', 'free'))
        generators = []
        for entries in payload['generators']:
            side = int(round(np.sqrt(len(entries))))
            generators.append(validate(np.array(entries, dtype=float).reshape(side, side), basis))

        self.io_stats['generator_files_loaded'] += 1
        logger.debug("Geradores carregados", file=str(path), count=len(generators), basis=basis.value)
        return GroupPresentation(tuple(generators), hint)

    # ------------------------------------------------------------------
    # Escrita
    # ------------------------------------------------------------------

    def _target(self, filename: PathLike) -> Path:
        path = Path(filename)
        if not path.is_absolute():
            path = self.output_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _written(self, path: Path) -> Path:
        self.io_stats['files_written'] += 1
        self.io_stats['bytes_written'] += path.stat().st_size
        logger.info("Arquivo gravado", file=str(path), bytes=path.stat().st_size)
        return path

    def write_matrices(self, matrices: Sequence[np.ndarray], filename: PathLike, header: Optional[str] = None) -> Path:
        path = self._target(filename)
        lines = [f"# {line}" for line in (header or '').splitlines()]
        for index, matrix in enumerate(matrices):
            if index:
                lines.append('')
            lines.extend(
                ' '.join(settings.export.float_format % value for value in row)
                for row in np.atleast_2d(matrix)
            )
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        return self._written(path)

    def write_csv(self, frame: pd.DataFrame, filename: PathLike) -> Path:
        path = self._target(filename)
        frame.to_csv(
            path,
            index=False,
            float_format=settings.export.float_format,
            encoding=settings.export.csv_encoding,
            lineterminator='\n',
        )
        return self._written(path)

    def write_json(self, payload: Dict[str, Any], filename: PathLike) -> Path:
        path = self._target(filename)
        path.write_bytes(
            orjson.dumps(
                payload,
                default=json_default,
                option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS
                | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_NON_STR_KEYS,
            ) + b'\n'
        )
        return self._written(path)

    def write_obj(self, surfaces: Dict[str, Surface], filename: PathLike) -> Path:
        """
        Grava superfícies trianguladas num único OBJ, uma por grupo ``g``.

        Args:
            surfaces: nome → (vértices (V, 3) como x y t, faces (F, 3) base 0)
        """
        path = self._target(filename)
        fmt = settings.export.float_format
        lines = ["# ads-geometry: vértices x y t"]
        offset = 0
        for name, (vertices, faces) in surfaces.items():
            lines.append(f"g {name}")
            lines.extend('v ' + ' '.join(fmt % value for value in vertex) for vertex in vertices)
            lines.extend(
                'f ' + ' '.join(str(int(index) + 1 + offset) for index in face) for face in faces
            )
            offset += len(vertices)
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        return self._written(path)

    def get_io_stats(self) -> Dict[str, Any]:
        return dict(self.io_stats)
