"""Hot kernels with a compiled implementation and a pure-Python fallback.

The compiled module is used when it imports; setting ``MELL_PURE_PYTHON=1``
forces the fallback.  ``BACKEND`` names the implementation in use.
"""

from __future__ import annotations

import os

from mell.kernel import _kernel_py

try:
    if os.environ.get("MELL_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from mell.kernel import _kernel as _impl  # type: ignore[attr-defined]

    BACKEND = "compiled"
except ImportError:
    _impl = _kernel_py
    BACKEND = "python"

canonical_key = _impl.canonical_key
term_size = _impl.term_size

__all__ = ["BACKEND", "canonical_key", "term_size"]
