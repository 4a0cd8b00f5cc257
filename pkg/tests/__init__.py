# tests/__init__.py
"""
Testes do toolkit de geometria AdS / universo de Einstein.

Cobre o núcleo numérico (formas, grupos, modelos, causalidade, conjuntos
limite, domínio invisível e geodésicas causais), as ferramentas, a leitura
e escrita de arquivos e a CLI.
"""

import os
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent
SRC_DIR = PROJECT_ROOT / "src"

for path in (PROJECT_ROOT, SRC_DIR):
    if str(path) not in sys.path:
        sys.path.insert(0, str(path))

# Configurações de teste para evitar conflitos com produção
os.environ.setdefault("TESTING", "true")
os.environ.setdefault("LOG_LEVEL", "WARNING")

__test_version__ = "1.0.0"
__compatible_system_version__ = "1.0.0"
