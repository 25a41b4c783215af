"""Selects the compiled lattice-sum kernel, falling back to numpy.

Set EKKIT_PURE=1 to force the numpy implementation.
"""
import os

from . import _kernel_py

BACKEND = "python"
f_table = _kernel_py.f_table
f_table_batch = _kernel_py.f_table_batch

if os.environ.get("EKKIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        f_table = _kernel.f_table
        f_table_batch = _kernel.f_table_batch
        BACKEND = "cython"
