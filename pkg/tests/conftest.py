import itertools

import numpy as np
import pytest

from boxpierce import kernels
from boxpierce.geometry import AxisBox, BoxFamily, clique_common_point

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def random_family(rng, n, d=2, grid=64, max_side=40, min_side=0):
    lo = rng.integers(0, grid, (n, d))
    hi = lo + rng.integers(min_side, max_side + 1, (n, d))
    return BoxFamily(AxisBox(a.tolist(), b.tolist()) for a, b in zip(lo, hi))


def contains(box, pt):
    return all(a <= x <= b for a, x, b in zip(box.lo, pt, box.hi))


def covers(fam, pts):
    return all(any(contains(b, p) for p in pts) for b in fam)


# brute-force oracles, deliberately naive and independent of the package

def brute_depth(fam, subset=None):
    idx = list(range(len(fam))) if subset is None else list(subset)
    best = 0
    for r in range(1, len(idx) + 1):
        if any(clique_common_point(fam, s) is not None for s in itertools.combinations(idx, r)):
            best = r
        else:
            break
    return best


def brute_nu(fam):
    n = len(fam)
    disjoint = {(i, j) for i, j in itertools.combinations(range(n), 2)
                if clique_common_point(fam, (i, j)) is None}
    best = 1
    for r in range(2, n + 1):
        if any(all(pr in disjoint for pr in itertools.combinations(s, 2)) for s in itertools.combinations(range(n), r)):
            best = r
        else:
            break
    return best


def brute_tau(fam):
    """Exhaustive search over lower-corner grid points, grouped by what they cover."""
    axes = [sorted({b.lo[a] for b in fam}) for a in range(fam.dim)]
    masks = set()
    for pt in itertools.product(*axes):
        m = sum(1 << i for i, b in enumerate(fam) if contains(b, pt))
        if m:
            masks.add(m)
    masks = [m for m in masks if not any(m != o and m & o == m for o in masks)]
    full = (1 << len(fam)) - 1
    for k in range(1, len(fam) + 1):
        for combo in itertools.combinations(masks, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                return k
    raise AssertionError("unreachable")


def brute_has_pq(fam, p, q):
    return all(brute_depth(fam, s) >= q for s in itertools.combinations(range(len(fam)), p))


def brute_chromatic(g):
    nodes = sorted(g.nodes())
    for k in range(1, len(nodes) + 1):
        for colors in itertools.product(range(k), repeat=len(nodes)):
            c = dict(zip(nodes, colors))
            if all(c[u] != c[v] for u, v in g.edges()):
                return k
    return 0


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    old = kernels.backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(old)


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(log):
        title, status, detail = log[k]
        terminalreporter.write_line(f"criterion {k:>2} [{status}] {title}" + (f" -- {detail}" if detail else ""))
