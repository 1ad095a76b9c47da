"""Kernel backend selection.

The compiled extension is preferred.  Setting ``TOPODIST_PURE_PYTHON=1``
forces the pure-Python kernels, which is also what happens when the
extension was not built.
"""

import os

from topodist import _kernels_py

BACKEND = "python"
kruskal_merges = _kernels_py.kruskal_merges
reduce_triangles = _kernels_py.reduce_triangles
reduce_coboundary = _kernels_py.reduce_coboundary

if os.environ.get("TOPODIST_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from topodist import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        kruskal_merges = _kernels.kruskal_merges
        reduce_triangles = _kernels.reduce_triangles
        reduce_coboundary = _kernels.reduce_coboundary


def backends():
    """Map of backend name to kernel module for every available backend."""
    found = {"python": _kernels_py}
    try:
        from topodist import _kernels
    except ImportError:
        return found
    found["compiled"] = _kernels
    return found
