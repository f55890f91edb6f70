"""Select the compiled kernels when available, else the pure-Python ones.

Set MCDUAL_PURE_PYTHON=1 to force the fallback.
"""

import os

if os.environ.get("MCDUAL_PURE_PYTHON"):
    from . import _kernels_py as impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as impl
        BACKEND = "python"

concat_mul = impl.concat_mul
leibniz = impl.leibniz
find_redex = impl.find_redex
