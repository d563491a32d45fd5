"""Select the compiled kernel when it is importable, else the numpy twin.

Set ``FORCING_LAB_PURE=1`` to force the fallback (used by the benchmark and
by the backend-equivalence tests).
"""

import os

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernel_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and os.environ.get("FORCING_LAB_PURE", "") in ("", "0"):
    kernel = _compiled
    NAME = "compiled"
else:
    kernel = _kernel_py
    NAME = "python"


def get(name=None):
    """Kernel module by name; ``None`` means the import-time default."""
    if name is None:
        return kernel
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
