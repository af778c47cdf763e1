"""Backend selection for the numerical kernels.

The compiled Cython module is preferred; the numpy implementation is the
fallback.  Set SPHPEND_KERNELS=python to force the fallback.
"""

import os

if os.environ.get("SPHPEND_KERNELS", "").lower() == "python":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
SPLIT_EPS = _impl.SPLIT_EPS
quad_sums = _impl.quad_sums
rk4_full = _impl.rk4_full
rk4_reduced = _impl.rk4_reduced
reduced_return = _impl.reduced_return
