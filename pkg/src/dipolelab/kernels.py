"""Backend selection for the tridiagonal pencil kernels.

The compiled extension is used when it imports; setting the environment
variable ``DIPOLELAB_PURE_PYTHON=1`` forces the pure-Python twin.
"""

import os

from . import _tridiag_py

BACKEND = "python"

if os.environ.get("DIPOLELAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _tridiag_py
else:
    try:
        from . import _tridiag as _impl

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _tridiag_py

sturm_count = _impl.sturm_count
bisect_levels = _impl.bisect_levels
inverse_iteration = _impl.inverse_iteration

__all__ = ["BACKEND", "sturm_count", "bisect_levels", "inverse_iteration"]
