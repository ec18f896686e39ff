"""Kernel backend selection.

The compiled Cython kernels are preferred when the extension built; the numpy
fallback gives identical results (up to summation-order ulps) everywhere.
Set KONDO_KERNELS=python or KONDO_KERNELS=cython to force a choice; forcing
the compiled backend when it is absent raises ImportError rather than
silently degrading.
"""

from __future__ import annotations

import os


def _load():
    forced = os.environ.get("KONDO_KERNELS", "").strip().lower()
    if forced in ("py", "python", "numpy"):
        from . import _kernels_py as impl
        return impl, "python"
    if forced in ("c", "cy", "cython", "compiled"):
        from . import _kernels_cy as impl
        return impl, "cython"
    if forced:
        raise ValueError(
            f"KONDO_KERNELS={forced!r} not understood (use 'python' or 'cython')")
    try:
        from . import _kernels_cy as impl
        return impl, "cython"
    except ImportError:
        from . import _kernels_py as impl
        return impl, "python"


kernels, KERNEL_BACKEND = _load()


def kernel_backend() -> str:
    """Name of the active kernel backend: 'cython' or 'python'."""
    return KERNEL_BACKEND
