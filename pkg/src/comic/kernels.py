"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels run with identical results. Set ``COMIC_KERNEL=python`` to force the
fallback.
"""

import os

from comic import _pykernel
from comic._pykernel import BudgetExceeded

_impl = _pykernel
if os.environ.get("COMIC_KERNEL", "").lower() != "python":
    try:
        from comic import _ckernel as _impl
    except ImportError:
        _impl = _pykernel

BACKEND = _impl.BACKEND
comic_simulate = _impl.comic_simulate
comic_batch = _impl.comic_batch
comic_exact = _impl.comic_exact
oneshot_simulate = _impl.oneshot_simulate
oneshot_batch = _impl.oneshot_batch
oneshot_exact = _impl.oneshot_exact

__all__ = [
    "BACKEND",
    "BudgetExceeded",
    "comic_simulate",
    "comic_batch",
    "comic_exact",
    "oneshot_simulate",
    "oneshot_batch",
    "oneshot_exact",
]
