"""Kernel dispatch: compiled extension when available, NumPy otherwise.

Set LORAMAB_PURE=1 to force the NumPy backend regardless of what was
built. `BACKEND` reports which implementation is active.
"""

import os

if os.environ.get("LORAMAB_PURE"):
    from . import pure as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import pure as _impl

BACKEND: str = _impl.BACKEND
window_counts = _impl.window_counts
sic_h0_value = _impl.sic_h0_value
sic_h1_value = _impl.sic_h1_value
sic_scan = _impl.sic_scan
ucb_select = _impl.ucb_select

__all__ = [
    "BACKEND",
    "window_counts",
    "sic_h0_value",
    "sic_h1_value",
    "sic_scan",
    "ucb_select",
]
