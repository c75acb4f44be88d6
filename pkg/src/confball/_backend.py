"""Kernel backend selection.

The compiled core is preferred when importable; the pure-Python twin is the
fallback.  ``CONFBALL_BACKEND=pure`` or ``=compiled`` forces the choice
(the latter raises if the extension is missing rather than silently
degrading a benchmark).
"""

import os

from . import _kernel_py

_forced = os.environ.get("CONFBALL_BACKEND", "").strip().lower()

if _forced == "pure":
    kernel = _kernel_py
elif _forced == "compiled":
    from . import _core as kernel  # noqa: F401  (ImportError is the point)
elif _forced == "":
    try:
        from . import _core as kernel
    except ImportError:
        kernel = _kernel_py
else:
    raise RuntimeError(
        f"CONFBALL_BACKEND={_forced!r} not understood (use 'pure' or 'compiled')"
    )


def backend_name() -> str:
    return kernel.BACKEND_NAME


def available_backends():
    """Return the importable kernel modules keyed by name (for benchmarks)."""
    found = {"pure": _kernel_py}
    try:
        from . import _core
        found["compiled"] = _core
    except ImportError:
        pass
    return found
