"""Pure-numpy kernels.  Same contracts and tie-breaking as ``_numba``.

All arrays are int64 coordinate ranks: ``lo``/``hi`` have shape (m, d).
"""
import numpy as np


def intersect_matrix(lo, hi):
    if lo.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.bool_)
    ok = (lo[:, None, :] <= hi[None, :, :]) & (lo[None, :, :] <= hi[:, None, :])
    return ok.all(axis=2)


def greedy_packing(lo, hi, order):
    """Scan boxes in ``order``; keep each one disjoint from all kept so far."""
    m, d = lo.shape
    keep = []
    plo = np.empty((m, d), dtype=np.int64)
    phi = np.empty((m, d), dtype=np.int64)
    k = 0
    for i in order:
        if k:
            hit = ((plo[:k] <= hi[i]) & (lo[i] <= phi[:k])).all(axis=1)
            if hit.any():
                continue
        plo[k] = lo[i]
        phi[k] = hi[i]
        k += 1
        keep.append(i)
    return np.asarray(keep, dtype=np.int64)


def max_depth_1d(lo, hi):
    """(depth, rank) with rank the smallest lower endpoint of maximum depth."""
    if lo.shape[0] == 0:
        return 0, -1
    cand = np.unique(lo)
    depth = np.searchsorted(np.sort(lo), cand, side="right") - np.searchsorted(
        np.sort(hi), cand, side="left"
    )
    j = int(np.argmax(depth))
    return int(depth[j]), int(cand[j])


def max_depth_2d(lo, hi):
    if lo.shape[0] == 0:
        return 0, -1, -1
    best, bx, by = 0, -1, -1
    for x in np.unique(lo[:, 0]):
        act = (lo[:, 0] <= x) & (x <= hi[:, 0])
        if act.sum() <= best:
            continue
        dep, y = max_depth_1d(lo[act, 1], hi[act, 1])
        if dep > best:
            best, bx, by = dep, int(x), y
    return best, bx, by


def stab_intervals(lo, hi):
    """Right-endpoint greedy; returns stab ranks in increasing order."""
    order = np.argsort(hi, kind="stable")
    out = []
    last = None
    for i in order:
        if last is None or lo[i] > last:
            last = hi[i]
            out.append(last)
    return np.asarray(out, dtype=np.int64)


def greedy_pairing(lo, hi):
    """Pair each box with the lowest-index intersecting partner still free.

    Returns ``(pairs, singles)``: an (k, 2) array and the leftover indices.
    """
    m = lo.shape[0]
    free = np.ones(m, dtype=np.bool_)
    pairs = []
    singles = []
    for i in range(m):
        if not free[i]:
            continue
        free[i] = False
        hit = free & ((lo <= hi[i]) & (lo[i] <= hi)).all(axis=1)
        js = np.flatnonzero(hit)
        if js.size:
            j = js[0]
            free[j] = False
            pairs.append((i, j))
        else:
            singles.append(i)
    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2), np.asarray(singles, dtype=np.int64)


def covered_mask(lo, hi, pts):
    """covered[i] is True when some row of ``pts`` lies in box i."""
    m = lo.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for start in range(0, pts.shape[0], 64):
        chunk = pts[start:start + 64]
        inside = ((lo[:, None, :] <= chunk[None, :, :]) & (chunk[None, :, :] <= hi[:, None, :])).all(axis=2)
        out |= inside.any(axis=1)
    return out
