"""Backend selection for the automaton kernels.

The compiled extension is used when it imports; set ``SYNCWORD_PURE=1`` to
force the numpy/Python versions.
"""

import os

from . import _kernels_py

if os.environ.get("SYNCWORD_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

product = _impl.product
determinize = _impl.determinize
refine = _impl.refine
bfs_order = _impl.bfs_order


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
