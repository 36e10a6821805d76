"""Hot loops: compiled extension when available, numpy fallback otherwise.

Set ``DRIFTRL_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import fallback

BACKEND = "python"
_impl = fallback

if not os.environ.get("DRIFTRL_PURE_PYTHON"):
    try:
        from . import _core as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = fallback

sort_desc = _impl.sort_desc
optimistic_rows = _impl.optimistic_rows
evi_sweeps = _impl.evi_sweeps
ssp_sweeps = _impl.ssp_sweeps


def available_backends():
    """Name -> module for every importable backend."""
    out = {"python": fallback}
    try:
        from . import _core
        out["cython"] = _core
    except ImportError:
        pass
    return out
