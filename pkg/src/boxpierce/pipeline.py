"""(p,q) piercing pipelines built on packings, dichotomies and the (p,2)-piercer.

All recursion runs on index arrays into one root family and produces points
in rank space; public entry points convert back to exact rationals after the
coverage check.

Building blocks
  cute      greedy pairing: two boxes per point while intersecting pairs remain
  refine    turn a transversal of F minus a maximal packing S into one of F,
            using |T| + |S| - 1 points
  dol1      p <= 2q - 2: peel maximal packings until one clique is left
  dol2      p < C(q+1, 2), rectangles: peel packings until C(lam+1, 2) <= p-q+1,
            then the (lam+1, 2)-piercer
  weak      halve (p, q) with property checks, splitting off bad sets
  rect_main the rectangle algorithm for q >= 7 log2 p
  generic   the T_c engine for any family with a (p,2)-piercer of size p f(p)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import InternalError, InvalidInput, OutOfRange, PropertyViolation
from .geometry import BoxFamily, _check_indices, as_point
from .oracles import ASSUMED_HOLDS, OracleConfig, check_arrays, packing_arrays
from .p2 import p2_bound, p2_bound_table, p2_ranks
from .thresholds import ThresholdFn, check_f_admissible, compute_Tc

P2Handle = Callable  # (lo, hi, p, cfg) -> (rank points, certified)


@dataclass
class RunReport:
    transversal: list
    claimed_bound: int
    certified: bool
    trace: list = field(default_factory=list)

    def __len__(self):
        return len(self.transversal)


class _Solver:
    def __init__(self, fam: BoxFamily, cfg: OracleConfig, p2: P2Handle = p2_ranks):
        self.fam = fam
        self.lo = fam.lo_ranks
        self.hi = fam.hi_ranks
        self.cfg = cfg
        self.p2_handle = p2
        self.certified = True
        self.trace = []
        self.empty = np.zeros((0, fam.dim), dtype=np.int64)

    def log(self, step, params, n, pts):
        self.trace.append((step, params, {"n": int(n), "points": len(pts)}))
        return pts

    # -- primitives --------------------------------------------------------

    def is_clique(self, idx):
        return kernels.max_depth(self.lo[idx], self.hi[idx])[0] == len(idx)

    def clique_point(self, idx):
        return self.lo[idx].max(axis=0)

    def pack(self, idx):
        """Maximal packing of ``idx`` as sorted root indices, plus is-maximum."""
        local, maximum = packing_arrays(self.lo[idx], self.hi[idx], self.cfg)
        return np.sort(idx[local]), maximum

    def pack_nontrivial(self, idx):
        """Maximal packing with >= 2 boxes for a family that is not a clique."""
        S, maximum = self.pack(idx)
        if len(S) >= 2:
            return S, maximum
        adj = kernels.intersect_matrix(self.lo[idx], self.hi[idx])
        i, j = np.argwhere(~adj)[0]
        rest = [k for k in range(len(idx)) if k != i and k != j]
        order = np.asarray([i, j] + rest, dtype=np.int64)
        local = kernels.greedy_packing(self.lo[idx], self.hi[idx], order)
        return np.sort(idx[local]), False

    def check_packing(self, idx, S, p, q):
        """A packing larger than p - q + 1 refutes the (p, q)-property."""
        lam = len(S)
        if lam <= p - q + 1 or len(idx) < p:
            return
        others = np.setdiff1d(idx, S, assume_unique=True)
        wit = S[:p] if lam >= p else np.concatenate([S, others[: p - lam]])
        dep, _ = kernels.max_depth(self.lo[wit], self.hi[wit])
        if dep >= q:
            raise InternalError("packing witness unexpectedly has depth >= q")
        raise PropertyViolation(
            f"{lam} pairwise-disjoint boxes exceed p-q+1={p - q + 1}; "
            f"these {p} boxes have no {q} with a common point", wit)

    def p2(self, idx, p):
        if len(idx) == 0:
            return self.empty
        pts, cert = self.p2_handle(self.lo[idx], self.hi[idx], p, self.cfg)
        self.certified &= bool(cert)
        return self.log("p2", {"p": p}, len(idx), np.asarray(pts, dtype=np.int64).reshape(-1, self.fam.dim))

    def check(self, idx, p, q):
        kind, bad = check_arrays(self.lo[idx], self.hi[idx], p, q, self.cfg)
        if kind == ASSUMED_HOLDS:
            self.certified = False
        self.trace.append(("dichotomy", {"p": p, "q": q, "verdict": kind}, {"n": len(idx), "points": 0}))
        return None if bad is None else idx[bad]

    # -- building blocks ---------------------------------------------------

    def cute(self, idx):
        pairs, singles = kernels.greedy_pairing(self.lo[idx], self.hi[idx])
        pts = [self.clique_point(idx[pr]) for pr in pairs]
        pts.extend(self.lo[idx[singles]])
        out = np.asarray(pts, dtype=np.int64).reshape(-1, self.fam.dim)
        return self.log("cute", {}, len(idx), out)

    def refine_points(self, S, X):
        """One point per box of S: shared with the boxes of X assigned to it."""
        groups = {int(b): [] for b in S}
        for a in X:
            hit = ((self.lo[S] <= self.hi[a]) & (self.lo[a] <= self.hi[S])).all(axis=1)
            if not hit.any():
                raise InvalidInput(f"packing is not maximal: box {a} misses every packed box")
            groups[int(S[np.argmax(hit)])].append(int(a))
        return np.asarray([self.clique_point(np.asarray(g + [b])) for b, g in groups.items()],
                          dtype=np.int64).reshape(-1, self.fam.dim)

    def refine(self, idx, S, T):
        rest = np.setdiff1d(idx, S, assume_unique=True)
        if len(T) == 0:
            if len(rest):
                raise InternalError("empty transversal for a nonempty remainder")
            return self.lo[S].copy()
        inside = kernels.covered_mask(self.lo[rest], self.hi[rest], T[0])
        out = np.vstack([T[1:], self.refine_points(S, rest[inside])])
        return self.log("refine", {"S": len(S), "T": len(T)}, len(idx), out)

    def dol1(self, idx, p, q):
        if len(idx) == 0:
            return self.empty
        if self.is_clique(idx):
            return self.log("dol1", {"p": p, "q": q}, len(idx), self.clique_point(idx)[None, :])
        S, _ = self.pack_nontrivial(idx)
        self.check_packing(idx, S, p, q)
        rest = np.setdiff1d(idx, S, assume_unique=True)
        T = self.dol1(rest, p - len(S), q - 1)
        return self.log("dol1", {"p": p, "q": q}, len(idx), self.refine(idx, S, T))

    def dol2(self, idx, p, q):
        if len(idx) == 0:
            return self.empty
        S, maximum = self.pack(idx)
        lam = len(S)
        self.check_packing(idx, S, p, q)
        if comb(lam + 1, 2) <= p - q + 1:
            if not maximum:
                self.certified = False
            out = self.p2(idx, lam + 1)
        else:
            if q - 1 < 2:
                raise InternalError(f"dol2 recursion reached q={q - 1}")
            rest = np.setdiff1d(idx, S, assume_unique=True)
            out = self.refine(idx, S, self.dol2(rest, p - lam, q - 1))
        return self.log("dol2", {"p": p, "q": q, "lambda": lam}, len(idx), out)

    def weak(self, idx, p, q, c):
        """Returns points; the S side uses |S| - depth(S) + 1 <= p - q + 1 points."""
        if p < q or q < 2:
            raise InvalidInput(f"weak pipeline needs 2 <= q <= p, got p={p}, q={q}")
        cur = idx
        bad_all = []
        pi, qi = p, q
        while qi > 2:
            pp, qq = pi // 2, (qi + 1) // 2
            if pp < qq:
                break
            bad = self.check(cur, pp, qq)
            if bad is None:
                new = (pp, qq)
            else:
                new = (pi - pp, qi - qq + 1)
                if new[0] < new[1] and len(cur) >= pi:
                    others = np.setdiff1d(cur, bad, assume_unique=True)[: pi - pp]
                    raise PropertyViolation(
                        f"a {pp}-set with no {qq} intersecting plus {pi - pp} more boxes "
                        f"has no {qi} with a common point", np.concatenate([bad, others]))
                bad_all.append(bad)
                cur = np.setdiff1d(cur, bad, assume_unique=True)
            if new[0] * qi > pi * new[1]:
                raise InternalError(f"ratio p/q grew from {pi}/{qi} to {new[0]}/{new[1]}")
            pi, qi = new
        final_p = pi if qi == 2 else max(2, pi - qi + 2)
        S = np.concatenate(bad_all) if bad_all else np.zeros(0, dtype=np.int64)
        if len(S) > p - 1:
            raise InternalError(f"bad sets total {len(S)} > p-1={p - 1}")
        out = [self.p2(cur, final_p)]
        if len(S):
            _, wit = kernels.max_depth(self.lo[S], self.hi[S])
            wit = np.asarray(wit, dtype=np.int64)
            inside = kernels.covered_mask(self.lo[S], self.hi[S], wit)
            out += [wit[None, :], self.lo[S[~inside]]]
        return self.log("weak", {"p": p, "q": q, "c": str(c), "final_p": final_p, "S": len(S)},
                        len(idx), np.vstack(out))

    def rect_main(self, idx, p, q):
        if len(idx) == 0:
            return self.empty
        if p < comb(q + 1, 2):
            return self.dol2(idx, p, q)
        S, maximum = self.pack(idx)
        lam = len(S)
        self.check_packing(idx, S, p, q)
        if 10 * lam >= p:
            rest = np.setdiff1d(idx, S, assume_unique=True)
            out = self.refine(idx, S, self.rect_main(rest, p - lam, q - 1))
            return self.log("rect-main/packing", {"p": p, "q": q, "lambda": lam}, len(idx), out)
        if not maximum:
            self.certified = False
        pp, qq = 62 * p // 100, (q + 1) // 2
        bad = self.check(idx, pp, qq)
        if bad is None:
            out = self.weak(idx, pp, qq, Fraction(7, 2))
        else:
            rest = np.setdiff1d(idx, bad, assume_unique=True)
            out = np.vstack([self.weak(rest, p - pp, qq, Fraction(7, 2)), self.cute(bad)])
        return self.log("rect-main/dichotomy", {"p": p, "q": q, "lambda": lam}, len(idx), out)

    def generic(self, idx, p, q):
        if len(idx) == 0:
            return self.empty
        if p <= 2 * q - 2:
            return self.dol1(idx, p, q)
        S, maximum = self.pack(idx)
        lam = len(S)
        self.check_packing(idx, S, p, q)
        if 100 * lam >= p:
            rest = np.setdiff1d(idx, S, assume_unique=True)
            out = self.refine(idx, S, self.generic(rest, p - lam, q - 1))
            return self.log("generic/packing", {"p": p, "q": q, "lambda": lam}, len(idx), out)
        if not maximum:
            self.certified = False
        pp, qq = -(-2 * p // 3), (q + 1) // 2
        bad = self.check(idx, pp, qq)
        if bad is None:
            out = self.weak(idx, pp, qq, 10)
        else:
            rest = np.setdiff1d(idx, bad, assume_unique=True)
            out = np.vstack([self.weak(rest, p - pp, qq, 50), self.cute(bad)])
        return self.log("generic/dichotomy", {"p": p, "q": q, "lambda": lam}, len(idx), out)

    # -- output ------------------------------------------------------------

    def finish(self, pts):
        pts = np.asarray(pts, dtype=np.int64).reshape(-1, self.fam.dim)
        if not kernels.covered_mask(self.lo, self.hi, pts).all():
            raise InternalError("transversal misses a box")
        return [self.fam.point_from_ranks(r) for r in pts]


def _all(fam):
    return np.arange(len(fam), dtype=np.int64)


def _check_pq(fam, p, q):
    if not 2 <= q <= p:
        raise InvalidInput(f"need 2 <= q <= p, got p={p}, q={q}")
    if len(fam) < p:
        raise InvalidInput(f"family has n={len(fam)} < p={p}; the (p,q)-property is vacuous")


def weak_bound(d: int, p: int, q: int) -> int:
    """Size bound of the weak pipeline: p - q + 1 + B_d(max(2, floor(2p/q)))."""
    return p - q + 1 + p2_bound(d, max(2, 2 * p // q))


def pierce_cute(fam: BoxFamily) -> list:
    """Pair up intersecting boxes (lowest index first), one point per pair or leftover."""
    s = _Solver(fam, OracleConfig())
    return s.finish(s.cute(_all(fam)))


def dol_refine(fam: BoxFamily, S, T) -> list:
    """Extend a transversal T of fam minus S to fam, using |T| + |S| - 1 points.

    ``S`` is an inclusion-maximal packing (a PackingResult or indices).
    """
    S = np.unique(np.asarray(_check_indices(fam, getattr(S, "indices", S)), dtype=np.int64))
    s = _Solver(fam, OracleConfig())
    lo, hi = s.lo, s.hi
    if len(S) > 1 and (kernels.intersect_matrix(lo[S], hi[S]).sum() > len(S)):
        raise InvalidInput("S is not a packing: two of its boxes intersect")
    T = [as_point(t) for t in T]
    rest = np.setdiff1d(_all(fam), S, assume_unique=True)
    if not T:
        if len(rest):
            raise InvalidInput("T is empty but fam minus S is not")
        return s.finish(lo[S])
    enc = np.asarray([fam.encode_point(t) for t in T])
    if not kernels.covered_mask(2 * lo[rest], 2 * hi[rest], enc).all():
        raise InvalidInput("T does not pierce fam minus S")
    inside = kernels.covered_mask(2 * lo[rest], 2 * hi[rest], enc[0])
    new = s.refine_points(S, rest[inside])
    if not kernels.covered_mask(2 * lo, 2 * hi, np.vstack([enc[1:], 2 * new])).all():
        raise InternalError("refined transversal misses a box")
    return T[1:] + [fam.point_from_ranks(r) for r in new]


def pierce_dol1(fam: BoxFamily, p: int, q: int, cfg: OracleConfig = OracleConfig()) -> list:
    """p - q + 1 points for (p, q)-families with p <= 2q - 2."""
    _check_pq(fam, p, q)
    if p > 2 * q - 2:
        raise InvalidInput(f"dol1 needs p <= 2q-2, got p={p}, q={q}")
    s = _Solver(fam, cfg)
    return s.finish(s.dol1(_all(fam), p, q))


def pierce_dol2_rect(fam: BoxFamily, p: int, q: int, cfg: OracleConfig = OracleConfig()) -> list:
    """p - q + 1 points for rectangle (p, q)-families with p < C(q+1, 2)."""
    _check_pq(fam, p, q)
    if fam.dim != 2:
        raise InvalidInput(f"dol2 is for rectangles, got dim {fam.dim}")
    if p >= comb(q + 1, 2):
        raise InvalidInput(f"dol2 needs p < C(q+1,2)={comb(q + 1, 2)}, got p={p}")
    s = _Solver(fam, cfg)
    return s.finish(s.dol2(_all(fam), p, q))


def pierce_weak(fam: BoxFamily, p: int, q: int, c=Fraction(7, 2), cfg: OracleConfig = OracleConfig(),
                p2: P2Handle = p2_ranks) -> list:
    """Halving pipeline.  At most p - q + 1 + B_d(floor(2p/q)) points when verdicts are exact."""
    _check_pq(fam, p, q)
    s = _Solver(fam, cfg, p2)
    return s.finish(s.weak(_all(fam), p, q, Fraction(c)))


def rect_main_in_range(p: int, q: int) -> bool:
    """q >= 7 log2 p, decided exactly as 2**q >= p**7."""
    return 2 ** q >= p ** 7


def pierce_rect_main(fam: BoxFamily, p: int, q: int, cfg: OracleConfig = OracleConfig()) -> RunReport:
    _check_pq(fam, p, q)
    if fam.dim != 2:
        raise InvalidInput(f"rect-main is for rectangles, got dim {fam.dim}")
    if not rect_main_in_range(p, q):
        raise OutOfRange(f"q={q} < 7*log2(p) for p={p}")
    s = _Solver(fam, cfg)
    pts = s.finish(s.rect_main(_all(fam), p, q))
    return RunReport(pts, p - q + 1, s.certified, s.trace)


def pierce_generic_engine(fam: BoxFamily, p: int, q: int, tf: Optional[ThresholdFn] = None,
                          p2: P2Handle = p2_ranks, cfg: OracleConfig = OracleConfig()) -> RunReport:
    """p - q + 1 points whenever q >= T_100(p) for an admissible f.

    ``p2`` must pierce any (p', 2)-family with at most p' f(p') points; for the
    built-in piercer this is checked against B_d and a shortfall clears the
    ``certified`` flag.
    """
    tf = ThresholdFn.log2(max(1, fam.dim - 1)) if tf is None else tf
    if tf.c != 100:
        raise InvalidInput(f"the generic engine runs with c=100, got c={tf.c}")
    adm = check_f_admissible(tf)
    if not adm.ok:
        x, cond = adm.violations[0]
        raise InvalidInput(f"f={tf} is not admissible: {cond} fails at x={x:.6g}")
    _check_pq(fam, p, q)
    T = compute_Tc(tf, p)
    if T is None or q < T:
        raise OutOfRange(f"q={q} is below T_100({p}) = {T} for f={tf}")
    s = _Solver(fam, cfg, p2)
    if p2 is p2_ranks and p >= 2:
        B = p2_bound_table(fam.dim, p)[2:]
        ps = np.arange(2, p + 1)
        fv = np.array([tf(x) for x in ps])
        if (B > ps * fv * (1 + 1e-12)).any():
            s.certified = False
            s.trace.append(("p2-bound-exceeds-pf(p)", {"f": str(tf)}, {"n": len(fam), "points": 0}))
    pts = s.finish(s.generic(_all(fam), p, q))
    return RunReport(pts, p - q + 1, s.certified, s.trace)


ALGORITHMS = ("p2", "cute", "weak", "dol1", "dol2", "rect-main", "generic")


def solve(fam: BoxFamily, alg: str, p: Optional[int] = None, q: Optional[int] = None, c=Fraction(7, 2),
          tf: Optional[ThresholdFn] = None, cfg: OracleConfig = OracleConfig()) -> RunReport:
    """Uniform entry point: every algorithm returns a RunReport."""
    if alg not in ALGORITHMS:
        raise InvalidInput(f"unknown algorithm {alg!r}; choose from {', '.join(ALGORITHMS)}")
    if alg == "cute":
        pts = pierce_cute(fam)
        bound = len(fam) if p is None else (len(fam) + p - 1) // 2
        return RunReport(pts, bound, cfg.exact, [("cute", {}, {"n": len(fam), "points": len(pts)})])
    if p is None:
        raise InvalidInput(f"algorithm {alg} needs p")
    if alg == "p2":
        s = _Solver(fam, cfg)
        pts, cert = p2_ranks(s.lo, s.hi, p, cfg, strict=True)
        return RunReport(s.finish(pts), p2_bound(fam.dim, p), cert, [("p2", {"p": p}, {"n": len(fam), "points": len(pts)})])
    if q is None:
        raise InvalidInput(f"algorithm {alg} needs q")
    if alg == "rect-main":
        return pierce_rect_main(fam, p, q, cfg)
    if alg == "generic":
        return pierce_generic_engine(fam, p, q, tf, cfg=cfg)
    _check_pq(fam, p, q)
    s = _Solver(fam, cfg)
    if alg == "dol1":
        if p > 2 * q - 2:
            raise InvalidInput(f"dol1 needs p <= 2q-2, got p={p}, q={q}")
        pts, bound = s.dol1(_all(fam), p, q), p - q + 1
    elif alg == "dol2":
        if fam.dim != 2 or p >= comb(q + 1, 2):
            raise InvalidInput("dol2 needs rectangles and p < C(q+1,2)")
        pts, bound = s.dol2(_all(fam), p, q), p - q + 1
    else:
        pts, bound = s.weak(_all(fam), p, q, Fraction(c)), weak_bound(fam.dim, p, q)
    return RunReport(s.finish(pts), bound, s.certified, s.trace)
