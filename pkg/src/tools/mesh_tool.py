"""
Malhas OBJ (n = 2) de f± e dos horizontes sobre o disco do hemisfério superior
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..config.settings import settings
from ..geometry.errors import EmptyBoundaryError
from ..geometry.invisible_domain import InvisibleDomain, Side
from ..utils.logger import get_logger
from .base_tool import BaseTool

logger = get_logger(__name__)


def hemisphere_disk(rings: int, sectors: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Grade polar do hemisfério superior fechado de S².

    Returns:
        (pontos de S² (V, 3), coordenadas do disco (V, 2), triângulos (F, 3));
        o vértice 0 é o polo e o último anel é o equador
    """
    radii = np.arange(1, rings + 1) / rings
    angles = 2.0 * np.pi * np.arange(sectors) / sectors
    rho = np.repeat(radii, sectors)
    phi = np.tile(angles, rings)

    disk = np.vstack([[0.0, 0.0], np.column_stack([rho * np.cos(phi), rho * np.sin(phi)])])
    polar = np.pi / 2.0 * np.concatenate([[0.0], rho])
    azimuth = np.concatenate([[0.0], phi])
    sphere = np.column_stack([
        np.sin(polar) * np.cos(azimuth),
        np.sin(polar) * np.sin(azimuth),
        np.cos(polar),
    ])

    def vertex(ring: int, sector: int) -> int:
        return 1 + ring * sectors + sector % sectors

    faces = [(0, vertex(0, j), vertex(0, j + 1)) for j in range(sectors)]
    for ring in range(rings - 1):
        for j in range(sectors):
            a, b = vertex(ring, j), vertex(ring, j + 1)
            c, d = vertex(ring + 1, j + 1), vertex(ring + 1, j)
            faces.append((a, d, c))
            faces.append((a, c, b))
    return sphere, disk, np.array(faces, dtype=int)


def surface_from_heights(disk: np.ndarray, heights: np.ndarray, faces: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vértices (x, y, t) finitos e as faces cujos três vértices sobrevivem."""
    finite = np.isfinite(heights)
    remap = np.full(heights.shape[0], -1, dtype=int)
    remap[finite] = np.arange(int(np.sum(finite)))
    kept_faces = faces[np.all(finite[faces], axis=1)]
    vertices = np.column_stack([disk[finite], heights[finite]])
    return vertices, remap[kept_faces]


class MeshTool(BaseTool):
    """Exporta superfícies do domínio invisível para consumidores externos."""

    def __init__(self):
        super().__init__("MeshTool")

    async def build_surfaces(
        self,
        domain: InvisibleDomain,
        rings: Optional[int] = None,
        sectors: Optional[int] = None
    ) -> Dict[str, Any]:
        """
        Returns:
            Dict com ``surfaces`` (nome → (vértices, faces)) para f⁺, f⁻ e,
            quando Λ± ∖ Λ não é vazio, os horizontes futuro e passado
        """
        rings = settings.export.mesh_rings if rings is None else rings
        sectors = settings.export.mesh_sectors if sectors is None else sectors

        async def body() -> Dict[str, Any]:
            if domain.n != 2:
                raise ValueError(f"Exportação de malha definida para n = 2 (recebeu n = {domain.n})")
            sphere, disk, faces = hemisphere_disk(rings, sectors)

            surfaces = {
                'f_plus': surface_from_heights(disk, domain.f_plus(sphere), faces),
                'f_minus': surface_from_heights(disk, domain.f_minus(sphere), faces),
            }
            try:
                surfaces['future_horizon'] = surface_from_heights(
                    disk, domain.horizon_surface(Side.PLUS, sphere), faces
                )
                surfaces['past_horizon'] = surface_from_heights(
                    disk, domain.horizon_surface(Side.MINUS, sphere), faces
                )
            except EmptyBoundaryError:
                logger.info("Sem horizontes: fronteira conforme vazia")

            counts = {name: int(len(vertices)) for name, (vertices, _) in surfaces.items()}
            return {
                'surfaces': surfaces,
                'vertex_counts': counts,
                'summary': ', '.join(f"{name}={count}" for name, count in counts.items()),
            }

        return await self.run_logged("build_surfaces", {'rings': rings, 'sectors': sectors}, body)

    def health_check(self) -> Dict[str, Any]:
        try:
            _, _, faces = hemisphere_disk(2, 4)
            expected = 4 + 2 * 4
            return {
                'status': 'healthy' if len(faces) == expected else 'error',
                'faces': int(len(faces)),
                'stats': self.get_tool_stats(),
            }
        except Exception as exc:
            return {'status': 'error', 'error': str(exc)}
