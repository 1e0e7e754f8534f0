"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``CCQMKP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pycore

if os.environ.get("CCQMKP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _ccore as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pycore
        BACKEND = "python"

Core = _impl.Core
Rng = _impl.Rng
REBUILD_INTERVAL = _pycore.REBUILD_INTERVAL


def backends() -> dict:
    """Every importable backend module, keyed by name."""
    found = {"python": _pycore}
    try:
        from . import _ccore
        found["cython"] = _ccore
    except ImportError:
        pass
    return found


def make_rng(seed=None):
    """Random stream of the active backend; passes existing streams through."""
    if isinstance(seed, (_pycore.Rng, Rng)):
        return seed
    return Rng(seed)
