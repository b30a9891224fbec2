"""Backend selection for the hot gate kernels.

The compiled Cython core is preferred when built; the numpy fallback is
numerically equivalent (same pair/quad update order per element). Set
QAMPLIFY_KERNELS=python or =cython to force a backend.
"""

import os

_choice = os.environ.get("QAMPLIFY_KERNELS", "auto")
if _choice not in ("auto", "cython", "python"):
    raise ValueError(f"QAMPLIFY_KERNELS must be auto|cython|python, got {_choice!r}")

if _choice == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        from . import _kernels_py as _impl

        BACKEND = "python"

apply_single = _impl.apply_single
apply_pair = _impl.apply_pair
