"""numba-compiled kernels mirroring ``_numpy`` (same outputs, same ties)."""
import numpy as np
from numba import njit


@njit(cache=True)
def intersect_matrix(lo, hi):
    m, d = lo.shape
    out = np.zeros((m, m), dtype=np.bool_)
    for i in range(m):
        out[i, i] = True
        for j in range(i + 1, m):
            ok = True
            for k in range(d):
                if lo[i, k] > hi[j, k] or lo[j, k] > hi[i, k]:
                    ok = False
                    break
            out[i, j] = ok
            out[j, i] = ok
    return out


@njit(cache=True)
def greedy_packing(lo, hi, order):
    m, d = lo.shape
    keep = np.empty(m, dtype=np.int64)
    k = 0
    for t in range(order.shape[0]):
        i = order[t]
        ok = True
        for s in range(k):
            j = keep[s]
            hit = True
            for a in range(d):
                if lo[i, a] > hi[j, a] or lo[j, a] > hi[i, a]:
                    hit = False
                    break
            if hit:
                ok = False
                break
        if ok:
            keep[k] = i
            k += 1
    return keep[:k].copy()


@njit(cache=True)
def max_depth_1d(lo, hi):
    m = lo.shape[0]
    if m == 0:
        return 0, -1
    slo = np.sort(lo)
    shi = np.sort(hi)
    best = 0
    arg = -1
    j = 0
    i = 0
    while i < m:
        x = slo[i]
        while i < m and slo[i] == x:
            i += 1
        while j < m and shi[j] < x:
            j += 1
        dep = i - j
        if dep > best:
            best = dep
            arg = x
    return best, arg


@njit(cache=True)
def _seg_add(t, a, size, l, r, v):
    # add v on leaf range [l, r); t[i] = max(children) + a[i]
    l += size
    r += size
    l0 = l
    r0 = r - 1
    while l < r:
        if l & 1:
            t[l] += v
            a[l] += v
            l += 1
        if r & 1:
            r -= 1
            t[r] += v
            a[r] += v
        l >>= 1
        r >>= 1
    for s in (l0, r0):
        i = s >> 1
        while i >= 1:
            t[i] = max(t[2 * i], t[2 * i + 1]) + a[i]
            i >>= 1


@njit(cache=True)
def _seg_argmax(t, a, size):
    i = 1
    while i < size:
        target = t[i] - a[i]
        if t[2 * i] == target:
            i = 2 * i
        else:
            i = 2 * i + 1
    return i - size


@njit(cache=True)
def max_depth_2d(lo, hi):
    """Sweep over x with a range-add / max segment tree over y ranks."""
    m = lo.shape[0]
    if m == 0:
        return 0, -1, -1
    ymax = 0
    for i in range(m):
        if hi[i, 1] > ymax:
            ymax = hi[i, 1]
    size = 1
    while size < ymax + 1:
        size *= 2
    t = np.zeros(2 * size, dtype=np.int64)
    a = np.zeros(2 * size, dtype=np.int64)
    by_lo = np.argsort(lo[:, 0], kind="mergesort")
    by_hi = np.argsort(hi[:, 0], kind="mergesort")
    best = 0
    bx = -1
    by = -1
    i = 0
    j = 0
    while i < m:
        x = lo[by_lo[i], 0]
        while j < m and hi[by_hi[j], 0] < x:
            b = by_hi[j]
            _seg_add(t, a, size, lo[b, 1], hi[b, 1] + 1, -1)
            j += 1
        while i < m and lo[by_lo[i], 0] == x:
            b = by_lo[i]
            _seg_add(t, a, size, lo[b, 1], hi[b, 1] + 1, 1)
            i += 1
        if t[1] > best:
            best = t[1]
            bx = x
            by = _seg_argmax(t, a, size)
    return best, bx, by


@njit(cache=True)
def stab_intervals(lo, hi):
    order = np.argsort(hi, kind="mergesort")
    out = np.empty(lo.shape[0], dtype=np.int64)
    k = 0
    have = False
    last = 0
    for t in range(order.shape[0]):
        i = order[t]
        if not have or lo[i] > last:
            last = hi[i]
            have = True
            out[k] = last
            k += 1
    return out[:k].copy()


@njit(cache=True)
def greedy_pairing(lo, hi):
    m, d = lo.shape
    free = np.ones(m, dtype=np.bool_)
    pairs = np.empty((m // 2, 2), dtype=np.int64)
    singles = np.empty(m, dtype=np.int64)
    npairs = 0
    nsingles = 0
    for i in range(m):
        if not free[i]:
            continue
        free[i] = False
        partner = -1
        for j in range(i + 1, m):
            if not free[j]:
                continue
            hit = True
            for k in range(d):
                if lo[i, k] > hi[j, k] or lo[j, k] > hi[i, k]:
                    hit = False
                    break
            if hit:
                partner = j
                break
        if partner >= 0:
            free[partner] = False
            pairs[npairs, 0] = i
            pairs[npairs, 1] = partner
            npairs += 1
        else:
            singles[nsingles] = i
            nsingles += 1
    return pairs[:npairs].copy(), singles[:nsingles].copy()


@njit(cache=True)
def covered_mask(lo, hi, pts):
    m, d = lo.shape
    out = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        for s in range(pts.shape[0]):
            inside = True
            for k in range(d):
                if pts[s, k] < lo[i, k] or pts[s, k] > hi[i, k]:
                    inside = False
                    break
            if inside:
                out[i] = True
                break
    return out
