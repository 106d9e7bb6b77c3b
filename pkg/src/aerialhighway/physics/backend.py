"""Selects the rigid-body kernel backend at import time.

The compiled Cython extension is preferred; the pure-Python twin is used when
the extension is missing or when AERIALHIGHWAY_PURE_PYTHON is set to a truthy
value. Both expose the same functions over the same packed parameter layout.
"""

import logging
import os

logger = logging.getLogger(__name__)

_FORCE_PURE = os.environ.get("AERIALHIGHWAY_PURE_PYTHON", "").strip().lower() in (
    "1", "true", "yes", "on",
)

if _FORCE_PURE:
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels
        logger.info("compiled physics kernel unavailable, using pure-Python fallback")

BACKEND = kernels.BACKEND


def load_kernel(name):
    """Load a specific kernel module by name ('compiled' or 'pure-python').

    Used by the parity tests and the benchmark; raises ImportError when the
    compiled extension was never built.
    """
    if name == "pure-python":
        from . import _kernels_py
        return _kernels_py
    if name == "compiled":
        from . import _kernels  # type: ignore[attr-defined]
        return _kernels
    raise ValueError(f"unknown kernel backend: {name!r}")
