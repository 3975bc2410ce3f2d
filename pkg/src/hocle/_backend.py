"""Select the kernel implementation at import time.

The compiled extension is preferred; set ``HOCLE_PURE_PYTHON=1`` to force
the numpy fallback (the test suite runs both).
"""

import os

from . import _kernels_py

BACKEND = "python"
kernels = _kernels_py

if os.environ.get("HOCLE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # noqa: F811
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass
