"""Ground truth at desk scale: depth, packing number, piercing number, (p,q) checks.

Exact routines are branch-and-bound searches over Python-int bitsets of the
intersection graph.  For boxes, a set of boxes has a common point iff it is a
clique of that graph, so graph searches are geometric searches.
Heuristic fallbacks are sound in one direction only and say so in their
result objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import networkx as nx
import numpy as np

from . import kernels
from .errors import CapExceeded, InternalError, InvalidInput
from .geometry import BoxFamily, _check_indices

EXACT = "exact"
HEURISTIC = "heuristic"

CERTIFIED_HOLDS = "certified-holds"
BAD_SET_FOUND = "bad-set-found"
ASSUMED_HOLDS = "assumed-holds"


@dataclass(frozen=True)
class OracleConfig:
    exact_size_cap: int = 24
    packing_cap: int = 40
    mode: str = EXACT

    def __post_init__(self):
        if self.mode not in (EXACT, HEURISTIC):
            raise InvalidInput(f"mode must be 'exact' or 'heuristic', got {self.mode!r}")
        if self.exact_size_cap < 1 or self.packing_cap < 1:
            raise InvalidInput("oracle caps must be >= 1")

    @property
    def exact(self) -> bool:
        return self.mode == EXACT


@dataclass(frozen=True)
class PackingResult:
    indices: tuple
    maximal: bool = True
    maximum: bool = False

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class PropertyVerdict:
    kind: str
    bad_set: Optional[tuple] = None

    @property
    def holds(self) -> bool:
        return self.kind != BAD_SET_FOUND

    @property
    def certified(self) -> bool:
        return self.kind != ASSUMED_HOLDS


# -- bitset graph helpers ----------------------------------------------------

def neighbor_masks(lo, hi) -> list:
    """Bit j of entry i is set when boxes i != j intersect."""
    adj = kernels.intersect_matrix(lo, hi)
    np.fill_diagonal(adj, False)
    return [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in adj]


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _bits(mask: int):
    while mask:
        v = _low(mask)
        yield v
        mask &= mask - 1


def _clique_cover(cand: int, nbr: list) -> list:
    """Greedy partition of ``cand`` into cliques; returns their sizes."""
    common, sizes = [], []
    for v in _bits(cand):
        for c in range(len(common)):
            if common[c] >> v & 1:
                common[c] &= nbr[v]
                sizes[c] += 1
                break
        else:
            common.append(nbr[v])
            sizes.append(1)
    return sizes


def _has_clique(mask: int, k: int, nbr: list) -> bool:
    if k <= 0:
        return True
    if mask.bit_count() < k:
        return False
    if k == 1:
        return True
    while mask:
        v = _low(mask)
        mask &= mask - 1
        if _has_clique(mask & nbr[v], k - 1, nbr):
            return True
        if mask.bit_count() < k:
            return False
    return False


def _greedy_independent(cand: int, nbr: list) -> list:
    out, blocked = [], 0
    for v in _bits(cand):
        if not blocked >> v & 1:
            out.append(v)
            blocked |= nbr[v]
    return out


def max_independent_set(nbr: list) -> list:
    """Maximum independent set; the lexicographically smallest among ties."""
    n = len(nbr)
    best = _greedy_independent((1 << n) - 1, nbr)
    cur = []

    def rec(cand):
        nonlocal best
        if not cand:
            if len(cur) > len(best):
                best = cur[:]
            return
        if len(cur) + len(_clique_cover(cand, nbr)) <= len(best):
            return
        v = _low(cand)
        bit = 1 << v
        cur.append(v)
        rec(cand & ~nbr[v] & ~bit)
        cur.pop()
        rec(cand & ~bit)

    rec((1 << n) - 1)
    return best


def sparse_subset(nbr: list, p: int, q: int) -> Optional[list]:
    """First p vertices (DFS order) spanning no q-clique, or None if none exist."""
    n = len(nbr)
    cur = []

    def bound(cand):
        return sum(min(s, q - 1) for s in _clique_cover(cand, nbr))

    def rec(cand, chosen):
        if len(cur) == p:
            return True
        if len(cur) + bound(cand) < p:
            return False
        v = _low(cand)
        rest = cand & ~(1 << v)
        if not _has_clique(chosen & nbr[v], q - 1, nbr):
            cur.append(v)
            if rec(rest, chosen | 1 << v):
                return True
            cur.pop()
        return rec(rest, chosen)

    return cur[:] if rec((1 << n) - 1, 0) else None


def min_clique_cover(nbr: list) -> list:
    """Minimum number of cliques covering all vertices, as vertex tuples.

    Candidate cliques are the maximal ones; branching picks the uncovered
    vertex with the fewest candidates.  The lower bound is a greedy
    independent set among uncovered vertices.
    """
    n = len(nbr)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in _bits(nbr[i]) if j > i)
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(g))
    masks = [sum(1 << v for v in c) for c in cliques]
    owners = [[s for s, mk in enumerate(masks) if mk >> e & 1] for e in range(n)]

    unc = (1 << n) - 1
    best = []
    while unc:
        s = max(range(len(masks)), key=lambda s: ((masks[s] & unc).bit_count(), -s))
        best.append(s)
        unc &= ~masks[s]
    chosen = []

    def rec(unc):
        nonlocal best
        if not unc:
            if len(chosen) < len(best):
                best = chosen[:]
            return
        if len(chosen) + len(_greedy_independent(unc, nbr)) >= len(best):
            return
        e = min(_bits(unc), key=lambda v: (len(owners[v]), v))
        for s in sorted(owners[e], key=lambda s: (-(masks[s] & unc).bit_count(), s)):
            chosen.append(s)
            rec(unc & ~masks[s])
            chosen.pop()

    rec((1 << n) - 1)
    return [cliques[s] for s in sorted(best)]


# -- array-level oracles (used by the solvers) --------------------------------

def packing_arrays(lo, hi, cfg: OracleConfig):
    """(local indices, is_maximum).  Always inclusion-maximal."""
    m = lo.shape[0]
    if m == 0:
        return np.zeros(0, dtype=np.int64), True
    if cfg.exact:
        if m > cfg.packing_cap:
            raise CapExceeded(f"exact packing requested for n={m} > packing_cap={cfg.packing_cap}")
        return np.asarray(max_independent_set(neighbor_masks(lo, hi)), dtype=np.int64), True
    return np.sort(kernels.greedy_packing(lo, hi)), False


def peel(lo, hi, q: int) -> np.ndarray:
    """Drop boxes at deepest points until depth < q; return survivors."""
    alive = np.arange(lo.shape[0])
    while alive.size:
        dep, wit = kernels.max_depth(lo[alive], hi[alive])
        if dep < q:
            break
        inside = alive[kernels.covered_mask(lo[alive], hi[alive], np.asarray(wit))]
        drop = inside[len(inside) - (dep - q + 1):]
        alive = np.setdiff1d(alive, drop, assume_unique=True)
    return alive


def check_arrays(lo, hi, p: int, q: int, cfg: OracleConfig):
    """(kind, local bad set or None) for the (p, q)-property of these boxes."""
    m = lo.shape[0]
    if m < p:
        # vacuous: no p-subset exists
        return CERTIFIED_HOLDS, None
    if cfg.exact:
        if m > cfg.exact_size_cap:
            raise CapExceeded(f"exact (p,q) check requested for n={m} > exact_size_cap={cfg.exact_size_cap}")
        bad = sparse_subset(neighbor_masks(lo, hi), p, q)
        if bad is None:
            return CERTIFIED_HOLDS, None
        bad = np.asarray(bad, dtype=np.int64)
    else:
        rest = peel(lo, hi, q)
        if rest.size < p:
            return ASSUMED_HOLDS, None
        bad = rest[:p]
    dep, _ = kernels.max_depth(lo[bad], hi[bad])
    if len(bad) != p or dep >= q:
        raise InternalError(f"bad set of size {len(bad)} has depth {dep} >= q={q}")
    return BAD_SET_FOUND, bad


# -- public API on BoxFamily ---------------------------------------------------

def _subset_arrays(fam: BoxFamily, subset):
    idx = np.arange(len(fam)) if subset is None else np.asarray(_check_indices(fam, subset), dtype=np.int64)
    return idx, fam.lo_ranks[idx], fam.hi_ranks[idx]


def max_depth(fam: BoxFamily, subset=None):
    """(depth, witness point) over ``subset`` (default: all boxes).

    The witness has every coordinate equal to some box's lower bound.
    Depth 0 with witness ``None`` for an empty subset.
    """
    _, lo, hi = _subset_arrays(fam, subset)
    dep, wit = kernels.max_depth(lo, hi)
    return dep, (None if wit is None else fam.point_from_ranks(wit))


def packing(fam: BoxFamily, cfg: OracleConfig = OracleConfig(), subset=None) -> PackingResult:
    idx, lo, hi = _subset_arrays(fam, subset)
    local, maximum = packing_arrays(lo, hi, cfg)
    return PackingResult(tuple(int(i) for i in idx[local]), maximal=True, maximum=maximum)


def piercing_number(fam: BoxFamily, cfg: OracleConfig = OracleConfig(), subset=None):
    """(tau, transversal) by exact minimum clique cover of the intersection graph.

    Each clique is pierced at its canonical point (per-axis max of lower
    bounds), so the search runs over the lower-bound grid restricted to points
    that are not dominated by another grid point.
    """
    if not cfg.exact:
        raise InvalidInput("piercing_number is exact-only")
    idx, lo, hi = _subset_arrays(fam, subset)
    if len(idx) > cfg.exact_size_cap:
        raise CapExceeded(f"exact tau requested for n={len(idx)} > exact_size_cap={cfg.exact_size_cap}")
    if len(idx) == 0:
        return 0, []
    cover = min_clique_cover(neighbor_masks(lo, hi))
    pts = [fam.point_from_ranks(lo[list(c)].max(axis=0)) for c in cover]
    if not kernels.covered_mask(lo, hi, np.array([lo[list(c)].max(axis=0) for c in cover])).all():
        raise InternalError("clique cover points fail to pierce the family")
    return len(pts), pts


def check_pq_property(fam: BoxFamily, p: int, q: int, cfg: OracleConfig = OracleConfig(), subset=None) -> PropertyVerdict:
    idx, lo, hi = _subset_arrays(fam, subset)
    if not 2 <= q <= p <= len(idx):
        raise InvalidInput(f"need 2 <= q <= p <= n, got p={p}, q={q}, n={len(idx)}")
    kind, bad = check_arrays(lo, hi, p, q, cfg)
    return PropertyVerdict(kind, None if bad is None else tuple(int(i) for i in idx[bad]))
