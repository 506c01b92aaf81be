"""Backend selection: rational coefficient type and term-dict kernels.

Coefficients are exact rationals everywhere.  ``gmpy2.mpq`` is used when
importable (GMP rationals are several times faster than
``fractions.Fraction``); the stdlib Fraction is the fallback.

The hot kernels on term dicts come in two interchangeable flavours: a
compiled Cython module (``coxops._speedups``) and a pure-Python one
(``coxops._kernels``).  The compiled one is preferred; set
``COXOPS_PURE=1`` to force the pure-Python kernels (the benchmark suite
uses this to compare both).
"""

from __future__ import annotations

import os

try:
    from gmpy2 import mpq as RAT
except ImportError:
    from fractions import Fraction as RAT  # type: ignore[assignment]

if os.environ.get("COXOPS_PURE"):
    from coxops import _kernels as kernels
else:
    try:
        from coxops import _speedups as kernels  # type: ignore[no-redef]
    except ImportError:
        from coxops import _kernels as kernels  # type: ignore[no-redef]


def kernel_name() -> str:
    """Which kernel implementation is live ("cython" or "pure")."""
    return getattr(kernels, "KERNEL_NAME", "pure")


def rational_name() -> str:
    return f"{RAT.__module__}.{RAT.__name__}" if hasattr(RAT, "__module__") else str(RAT)
