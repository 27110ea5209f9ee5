"""Voxel kernel backend selection.

Prefers the compiled extension when it imported cleanly, otherwise falls
back to the numpy reference implementation. Set ``PRINTOPT_PURE_PYTHON=1``
to force the fallback (useful for benchmarking and debugging); both
backends produce identical arrays.
"""

from __future__ import annotations

import os

from . import _voxel_np

if os.environ.get("PRINTOPT_PURE_PYTHON", "") not in ("", "0"):
    _backend = _voxel_np
    BACKEND = "numpy"
else:
    try:
        from . import _voxel_cy as _backend  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _backend = _voxel_np
        BACKEND = "numpy"

fill_columns = _backend.fill_columns
sample_shell = _backend.sample_shell

__all__ = ["BACKEND", "fill_columns", "sample_shell"]
