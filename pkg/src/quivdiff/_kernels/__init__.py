"""Dense mod-p kernels: compiled extension with a pure-Python fallback.

Both implementations expose the same functions with identical semantics
(same pivoting rule, same canonical representatives), so every result is
bit-for-bit independent of which backend is active.  Set QUIVDIFF_PURE=1
to force the fallback.
"""

import os

if os.environ.get("QUIVDIFF_PURE"):
    from . import modkernel_py as impl
else:
    try:
        from . import modkernel as impl  # type: ignore[no-redef]
    except ImportError:
        from . import modkernel_py as impl

BACKEND = impl.BACKEND
