"""Sampling kernels: compiled extension when available, pure Python otherwise.

Set MASKFILL_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging). Both implementations are operation-for-operation identical,
so outputs do not depend on which one is loaded.
"""

import os

if os.environ.get("MASKFILL_PURE_PYTHON"):
    from . import _pysampling as _impl

    KERNEL_BACKEND = "python"
else:
    try:
        from . import _csampling as _impl  # type: ignore[attr-defined]

        KERNEL_BACKEND = "cython"
    except ImportError:
        from . import _pysampling as _impl

        KERNEL_BACKEND = "python"

truncated_probs = _impl.truncated_probs
sample_index = _impl.sample_index

__all__ = ["KERNEL_BACKEND", "truncated_probs", "sample_index"]
