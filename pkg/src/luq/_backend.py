"""Kernel backend selection.

The environment variable LUQ_BACKEND picks the hot-loop implementation:

    auto   (default) numba when importable, numpy otherwise
    numba  require the compiled kernels, fail if numba is missing
    numpy  force the pure-numpy fallback

Both backends expose the same kernel functions and, given identical step
tables, produce bit-identical results on this platform.
"""

import os

_requested = os.environ.get("LUQ_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"LUQ_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

if _requested in ("auto", "numba"):
    try:
        from . import _kernels_nb as kernels

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _kernels_np as kernels

        BACKEND = "numpy"
else:
    from . import _kernels_np as kernels

    BACKEND = "numpy"


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
