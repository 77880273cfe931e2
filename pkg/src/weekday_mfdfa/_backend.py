"""Kernel selection.

The compiled extension is used when importable; set ``MFDFA_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

from . import _fallback

try:
    if os.environ.get("MFDFA_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend forced")
    from . import _kernels as _impl

    BACKEND = "compiled"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

segment_variances = _impl.segment_variances
apply_transpositions = _impl.apply_transpositions
