"""Pointwise Euler flux kernels with a compiled and a pure-Python backend.

The compiled extension is used when it was built at install time. Setting
the environment variable ``USBP_DG_PURE_PYTHON=1`` before import forces the
numpy fallback. The wrappers below accept states of shape ``(nvar, ...)``
and direction components that are scalars or arrays of the trailing shape.
"""

from __future__ import annotations

import os

import numpy as np

from . import _python

_compiled = None
if os.environ.get("USBP_DG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _native as _compiled
    except ImportError:
        _compiled = None

BACKEND = "native" if _compiled is not None else "python"

NATIVE_AVAILABLE = _compiled is not None


def _impl(backend):
    if backend is None:
        backend = BACKEND
    if backend == "native":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if backend == "python":
        return _python
    raise ValueError(f"unknown backend {backend!r}")


def _flat(u):
    u = np.asarray(u, dtype=float)
    shape = u.shape
    return np.ascontiguousarray(u.reshape(shape[0], -1)), shape


def _direction(n, tail):
    n = np.asarray(n, dtype=float)
    if n.ndim == 0 or n.size == 1:
        return np.full(1, float(n.reshape(-1)[0]))
    return np.ascontiguousarray(np.broadcast_to(n, tail).reshape(-1))


def euler_flux_1d(u, backend=None):
    flat, shape = _flat(u)
    return _impl(backend).euler_flux_1d(flat).reshape(shape)


def euler_flux_2d(u, nx, ny, backend=None):
    flat, shape = _flat(u)
    tail = shape[1:]
    f = _impl(backend).euler_flux_2d(flat, _direction(nx, tail), _direction(ny, tail))
    return f.reshape(shape)


def _split_1d(name, u, backend):
    flat, shape = _flat(u)
    fp, fm = getattr(_impl(backend), name)(flat)
    return fp.reshape(shape), fm.reshape(shape)


def _split_2d(name, u, nx, ny, backend):
    flat, shape = _flat(u)
    tail = shape[1:]
    fp, fm = getattr(_impl(backend), name)(flat, _direction(nx, tail), _direction(ny, tail))
    return fp.reshape(shape), fm.reshape(shape)


def steger_warming_1d(u, backend=None):
    return _split_1d("steger_warming_1d", u, backend)


def steger_warming_2d(u, nx, ny, backend=None):
    return _split_2d("steger_warming_2d", u, nx, ny, backend)


def van_leer_haenel_1d(u, backend=None):
    return _split_1d("van_leer_haenel_1d", u, backend)


def van_leer_haenel_2d(u, nx, ny, backend=None):
    return _split_2d("van_leer_haenel_2d", u, nx, ny, backend)
