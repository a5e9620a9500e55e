"""Numeric kernel backends.

The compiled extension (`_native`, Cython) is preferred when it was built;
otherwise the NumPy fallback (`pure`) is used.  Set ``WORKERLENS_PURE_PY=1``
to force the fallback.  Both backends implement the same two entry points
with identical results:

* ``split_search(X, y, w, feat_idx, min_leaf)`` - best weighted-Gini split
* ``smo_solve(K, y, C, tol, eps, max_steps)``   - SMO dual solver
"""

import os

from . import pure

_impl = pure
if not os.environ.get("WORKERLENS_PURE_PY"):
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = _impl.NAME
split_search = _impl.split_search
smo_solve = _impl.smo_solve


def backends() -> dict:
    """Importable backends by name (for parity tests and benchmarks)."""
    out = {"pure": pure}
    try:
        from . import _native
        out["native"] = _native
    except ImportError:
        pass
    return out
