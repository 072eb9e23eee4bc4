"""Kernel selection: compiled extension when present, pure Python otherwise.

Set ``PROCASPHERE_PURE=1`` in the environment to force the pure backend;
the equivalence tests and the benchmark use that switch to compare the two
implementations bit for bit.
"""

import os

if os.environ.get("PROCASPHERE_PURE", "") not in ("", "0"):
    from . import _core_py as kernel
else:
    try:
        from . import _core as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _core_py as kernel  # type: ignore[no-redef]


def active_backend() -> str:
    """Name of the kernel in use: 'compiled' or 'pure'."""
    return kernel.BACKEND
