"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is bit-identical
in its results. Set CONTRACTCHECK_FORCE_PY=1 to force the fallback
(used by the backend-agreement tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("CONTRACTCHECK_FORCE_PY"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
min_margin_scan = _impl.min_margin_scan
max_ratio_scan = _impl.max_ratio_scan
triangle_scan = _impl.triangle_scan
