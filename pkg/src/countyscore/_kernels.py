"""Select the compiled kernels when built, else the pure-Python ones.

Set ``COUNTYSCORE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _purepy

if os.environ.get("COUNTYSCORE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _purepy
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _purepy

BACKEND = "cython" if _impl is not _purepy else "python"
scan_lines = _impl.scan_lines
GrowthAccumulator = _impl.GrowthAccumulator
DROP_REASONS = _purepy.DROP_REASONS
