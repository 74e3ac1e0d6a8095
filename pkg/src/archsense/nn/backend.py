"""Kernel backend selection.

The compiled extension is preferred when present; ARCHSENSE_BACKEND=numpy
forces the fallback and ARCHSENSE_BACKEND=compiled makes a missing extension a
hard error instead of a silent slowdown.
"""

from __future__ import annotations

import os

_requested = os.environ.get("ARCHSENSE_BACKEND", "").strip().lower()
if _requested not in ("", "numpy", "compiled"):
    raise RuntimeError(
        f"ARCHSENSE_BACKEND must be 'numpy' or 'compiled', got {_requested!r}"
    )

kernels = None
BACKEND = "numpy"
if _requested != "numpy":
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
if kernels is None:
    from . import _kernels_np as kernels  # type: ignore[no-redef]


def available_backends() -> list[str]:
    out = ["numpy"]
    try:
        from . import _kernels_cy  # noqa: F401
        out.append("compiled")
    except ImportError:
        pass
    return out
