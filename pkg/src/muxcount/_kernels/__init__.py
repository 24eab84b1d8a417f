"""Kernel selection: compiled extension when available, pure Python otherwise.

Set MUX_PURE_PYTHON=1 to force the fallback (used by the parity tests and
the benchmark).
"""

import os

from . import pure

if os.environ.get("MUX_PURE_PYTHON", "") not in ("", "0"):
    compiled = None
else:
    try:
        from . import _fastcount as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else pure

IMPLEMENTATION = "compiled" if compiled is not None else "python"
