"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting the environment
variable ``WEYLGRAPHS_PURE=1`` forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("WEYLGRAPHS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend

BACKEND: str = _active.BACKEND
canon_search = _active.canon_search
mul2 = _active.mul2

__all__ = ["BACKEND", "canon_search", "mul2", "python_backend", "compiled_backend"]
