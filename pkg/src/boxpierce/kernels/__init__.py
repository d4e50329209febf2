"""Hot numeric kernels on int64 rank arrays.

The numba implementations are used by default.  Setting the environment
variable ``BOXPIERCE_NO_NUMBA=1`` (or calling :func:`set_backend`) switches to
the pure-numpy path; both produce identical results, ties included.
"""
import os

import numpy as np

from . import _numpy

_BACKENDS = {"numpy": _numpy}
try:
    from . import _numba

    _BACKENDS["numba"] = _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _numba = None

_impl = _numpy if os.environ.get("BOXPIERCE_NO_NUMBA", "") not in ("", "0") or _numba is None else _numba


def backend() -> str:
    return "numba" if _impl is _numba else "numpy"


def set_backend(name: str):
    global _impl
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_BACKENDS)}")
    _impl = _BACKENDS[name]


def _arr(x):
    return np.ascontiguousarray(x, dtype=np.int64)


def intersect_matrix(lo, hi):
    return _impl.intersect_matrix(_arr(lo), _arr(hi))


def greedy_packing(lo, hi, order=None):
    lo, hi = _arr(lo), _arr(hi)
    order = np.arange(lo.shape[0], dtype=np.int64) if order is None else _arr(order)
    return _impl.greedy_packing(lo, hi, order)


def stab_intervals(lo, hi):
    return _impl.stab_intervals(_arr(lo), _arr(hi))


def greedy_pairing(lo, hi):
    return _impl.greedy_pairing(_arr(lo), _arr(hi))


def covered_mask(lo, hi, pts):
    pts = _arr(pts).reshape(-1, np.asarray(lo).shape[1])
    return _impl.covered_mask(_arr(lo), _arr(hi), pts)


def max_depth(lo, hi):
    """Maximum number of boxes sharing a point, and the canonical witness.

    The witness is a tuple of ranks drawn from lower endpoints: among the
    deepest points, the lexicographically smallest one on that grid.
    """
    lo, hi = _arr(lo), _arr(hi)
    m, d = lo.shape
    if m == 0:
        return 0, None
    if d == 1:
        dep, x = _impl.max_depth_1d(lo[:, 0].copy(), hi[:, 0].copy())
        return int(dep), (int(x),)
    if d == 2:
        dep, x, y = _impl.max_depth_2d(lo, hi)
        return int(dep), (int(x), int(y))
    best, wit = 0, None
    for x in np.unique(lo[:, 0]):
        act = (lo[:, 0] <= x) & (x <= hi[:, 0])
        if act.sum() <= best:
            continue
        dep, sub = max_depth(lo[act, 1:], hi[act, 1:])
        if dep > best:
            best, wit = dep, (int(x),) + sub
    return best, wit
