"""Kernel backend selection.

The compiled extension is used when it imports cleanly; setting
``KCUT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

kernels = _pykernels
if os.environ.get("KCUT_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        kernels = _compiled

BACKEND: str = kernels.BACKEND
python_kernels = _pykernels


def compiled_kernels():
    """Return the compiled kernel module or ``None`` when unavailable."""
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels
