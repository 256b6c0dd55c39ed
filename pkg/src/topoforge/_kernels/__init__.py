"""Kernel backend selection.

The compiled kernel is preferred when importable; the pure numpy fallback
is otherwise used transparently.  Set ``TOPOFORGE_KERNELS=pure`` or
``=native`` to force a backend (``native`` raises if the extension is not
built).  Both backends produce identical outputs, including label order.
"""
import os

_requested = os.environ.get("TOPOFORGE_KERNELS", "auto").strip().lower()

if _requested == "pure":
    from . import _pure as _impl

    BACKEND = "pure"
elif _requested == "native":
    from . import _native as _impl  # type: ignore[attr-defined]

    BACKEND = "native"
elif _requested in ("", "auto"):
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"
else:
    raise ValueError(
        f"TOPOFORGE_KERNELS must be 'auto', 'pure', or 'native', got {_requested!r}"
    )

label_components = _impl.label_components
euler_cell_counts = _impl.euler_cell_counts

__all__ = ["BACKEND", "label_components", "euler_cell_counts"]
