"""Numba switch for the hot kernels.

Set ``LINNIKPAIR_NO_NUMBA=1`` to force the pure-numpy code paths even when
numba is importable. The flag is read once at import time; tests and the
benchmark flip it per call through :func:`force_backend`.
"""
from __future__ import annotations

import contextlib
import os

ENV_FLAG = "LINNIKPAIR_NO_NUMBA"

try:  # pragma: no cover - depends on the environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

HAVE_NUMBA = _numba is not None

_state = {"numba": HAVE_NUMBA and os.environ.get(ENV_FLAG, "0") not in ("1", "true", "yes")}


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, identity otherwise."""
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)


def use_numba() -> bool:
    return _state["numba"]


def backend_name() -> str:
    return "numba" if use_numba() else "numpy"


@contextlib.contextmanager
def force_backend(name: str):
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    old = _state["numba"]
    _state["numba"] = name == "numba"
    try:
        yield
    finally:
        _state["numba"] = old
