"""Kernel backend chosen at import.

The compiled extension is used when it is importable; set
``ONEBIT_CDG_BACKEND=python`` to force the numpy fallback (or ``compiled`` to
fail loudly when the extension is missing).
"""
import os

import numpy as np

from . import _kernels_py

__all__ = ["BACKEND", "available_backends", "get_backend", "hard_threshold", "hamming", "biht_loop"]

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ImportError(f"kernel backend {name!r} unavailable; have {available_backends()}") from None


_requested = os.environ.get("ONEBIT_CDG_BACKEND", "").strip().lower()
if _requested:
    _impl = get_backend(_requested)
    BACKEND = _requested
else:
    BACKEND = "compiled" if _compiled is not None else "python"
    _impl = _BACKENDS[BACKEND]


def hard_threshold(v, k):
    return _impl.hard_threshold(np.ascontiguousarray(v, dtype=float), k)


def hamming(a, s, b):
    return _impl.hamming(
        np.ascontiguousarray(a, dtype=float),
        np.ascontiguousarray(s, dtype=float),
        np.ascontiguousarray(b, dtype=np.int8),
    )


def biht_loop(a, b, k, max_iters, tau):
    return _impl.biht_loop(
        np.ascontiguousarray(a, dtype=float), np.ascontiguousarray(b, dtype=np.int8), k, max_iters, tau
    )
