"""Kernel backend selection.

The closed-loop integrator exists twice: a compiled extension and a pure
Python fallback written to perform identical floating-point work (see
_kernel_py).  Import prefers the compiled one and silently falls back.
Set OUTREG_BACKEND=python or OUTREG_BACKEND=compiled to force a choice;
forcing the compiled backend raises if the extension was not built.
"""

import os

from . import _kernel_py

_choice = os.environ.get("OUTREG_BACKEND", "").strip().lower()

if _choice in ("", "compiled"):
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "OUTREG_BACKEND=compiled but the outreg._kernel extension is not built"
            )
        _impl = _kernel_py
        BACKEND = "python"
elif _choice == "python":
    _impl = _kernel_py
    BACKEND = "python"
else:
    raise ValueError("OUTREG_BACKEND must be 'compiled' or 'python', got %r" % _choice)

run_closed_loop = _impl.run_closed_loop
