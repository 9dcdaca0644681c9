"""Pick the compiled kernels when importable, else the pure-Python ones.

Set ``RZDG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from rzdg import _pykernels

python_kernels = _pykernels

if os.environ.get("RZDG_PURE_PYTHON"):
    compiled_kernels = None
else:
    try:
        from rzdg import _ckernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "cython" if compiled_kernels is not None else "python"
