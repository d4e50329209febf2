from fractions import Fraction
from math import comb

import numpy as np
import pytest

from boxpierce.errors import InvalidInput, OutOfRange, PropertyViolation
from boxpierce.generators import gen_clique_union, gen_remark_family
from boxpierce.geometry import AxisBox, BoxFamily
from boxpierce.oracles import OracleConfig, check_pq_property, packing, piercing_number
from boxpierce.p2 import p2_bound
from boxpierce.pipeline import (dol_refine, pierce_cute, pierce_dol1, pierce_dol2_rect, pierce_generic_engine,
                                pierce_rect_main, pierce_weak, solve, weak_bound)
from boxpierce.thresholds import ThresholdFn, compute_Tc

from conftest import covers, random_family

HEUR = OracleConfig(mode="heuristic")
BIG = OracleConfig(packing_cap=10 ** 6)


def clique(m, d=2):
    return BoxFamily(AxisBox((i,) * d, (i + 2 * m,) * d) for i in range(m))


def disjoint(k, d=2):
    return BoxFamily(AxisBox((3 * i,) + (0,) * (d - 1), (3 * i + 1,) + (1,) * (d - 1)) for i in range(k))


def certified_instances(rng, count, region, n_range=(6, 15)):
    """Random families with an exactly certified (p, q) inside ``region``."""
    while count:
        n = int(rng.integers(*n_range))
        fam = random_family(rng, n, 2, max_side=int(rng.integers(25, 70)))
        p = int(rng.integers(2, n + 1))
        for q in range(p, 1, -1):
            if region(p, q) and check_pq_property(fam, p, q).kind == "certified-holds":
                yield fam, p, q
                count -= 1
                break


# -- cute -----------------------------------------------------------------

def test_cute_pairs_pairwise_intersecting():
    assert len(pierce_cute(clique(10))) == 5


def test_cute_disjoint():
    assert len(pierce_cute(disjoint(7))) == 7


def test_cute_bound_on_32_families():
    rng = np.random.default_rng(0)
    done = 0
    while done < 40:
        fam = random_family(rng, int(rng.integers(2, 21)), 2, max_side=60)
        nu = len(packing(fam))
        if nu > 2:
            continue
        m = len(fam)
        pts = pierce_cute(fam)
        assert covers(fam, pts)
        assert len(pts) <= (m + 2) // 2 and len(pts) <= (m + nu) // 2
        done += 1


# -- refine ---------------------------------------------------------------

def test_refine_single_clique():
    fam = clique(4)
    out = dol_refine(fam, [0], [(3, 3)])
    assert len(out) == 1 and covers(fam, out)


def test_refine_remark_family():
    inst = gen_remark_family(9, 5, 14, 2, seed=2)
    fam = inst.family
    S = packing(fam, BIG)
    assert len(S) == 5
    rest_pt = next(b.lo for i, b in enumerate(fam) if i not in S.indices)
    out = dol_refine(fam, S, [rest_pt])
    assert len(out) == 5 == inst.certificate.tau and covers(fam, out)


def test_refine_identity_random():
    rng = np.random.default_rng(1)
    done = 0
    while done < 60:
        fam = random_family(rng, int(rng.integers(2, 17)), 2)
        S = packing(fam)
        rest = [i for i in range(len(fam)) if i not in S.indices]
        if not rest:
            continue
        _, T = piercing_number(fam, subset=rest)
        out = dol_refine(fam, S, T)
        assert len(out) == len(T) + len(S) - 1 and covers(fam, out)
        done += 1


def test_refine_rejects_non_maximal_packing():
    fam = BoxFamily(list(disjoint(2)) + [AxisBox((100, 100), (101, 101))])
    with pytest.raises(InvalidInput):
        dol_refine(fam, [0], [(3, 0), (100, 100)])


def test_refine_rejects_overlapping_packing():
    with pytest.raises(InvalidInput):
        dol_refine(clique(3), [0, 1], [(2, 2)])


# -- Dol'nikov procedures -------------------------------------------------

def test_dol1_examples():
    assert len(pierce_dol1(clique(2), 2, 2)) == 1
    inst = gen_remark_family(6, 4, 10, 2, seed=4)
    pts = pierce_dol1(inst.family, 6, 4)
    assert len(pts) == 3 and covers(inst.family, pts)


def test_dol1_region_guard():
    with pytest.raises(InvalidInput):
        pierce_dol1(clique(8), 7, 4)


def test_dol1_random_certified():
    rng = np.random.default_rng(2)
    for fam, p, q in certified_instances(rng, 40, lambda p, q: p <= 2 * q - 2):
        pts = pierce_dol1(fam, p, q)
        assert covers(fam, pts) and len(pts) <= p - q + 1


def test_dol1_heuristic_also_tight():
    rng = np.random.default_rng(3)
    for fam, p, q in certified_instances(rng, 20, lambda p, q: p <= 2 * q - 2):
        pts = pierce_dol1(fam, p, q, HEUR)
        assert covers(fam, pts) and len(pts) <= p - q + 1


def test_dol2_examples():
    assert len(pierce_dol2_rect(clique(3), 2, 2)) == 1
    inst = gen_remark_family(9, 5, 12, 2, seed=5)
    assert len(pierce_dol2_rect(inst.family, 9, 5)) == 5
    with pytest.raises(InvalidInput):
        pierce_dol2_rect(clique(20), 15, 5)
    with pytest.raises(InvalidInput):
        pierce_dol2_rect(clique(3, d=3), 2, 2)


def test_dol2_random_certified():
    rng = np.random.default_rng(4)
    for fam, p, q in certified_instances(rng, 40, lambda p, q: p < comb(q + 1, 2)):
        pts = pierce_dol2_rect(fam, p, q)
        assert covers(fam, pts) and len(pts) <= p - q + 1


def test_packing_beyond_p_minus_q_plus_one_is_a_violation():
    fam = BoxFamily(list(disjoint(4)) + list(clique(4)))
    with pytest.raises(PropertyViolation) as err:
        pierce_dol1(fam, 6, 4)
    w = err.value.witness
    assert len(w) == 6


# -- weak pipeline --------------------------------------------------------

def test_weak_q2_is_plain_p2():
    inst = gen_clique_union(3, 12, 2, seed=0)
    rep = solve(inst.family, "weak", 4, 2, cfg=HEUR)
    assert [t[0] for t in rep.trace] == ["p2", "weak"]
    assert covers(inst.family, rep.transversal)


def test_weak_clique_family_one_point():
    assert len(pierce_weak(clique(10), 8, 8, Fraction(7, 2))) == 1


def test_weak_clique_union_bound():
    for seed in range(10):
        inst = gen_clique_union(4, 80, 2, seed=seed)
        pts = pierce_weak(inst.family, 64, 16, Fraction(7, 2), HEUR)
        assert covers(inst.family, pts) and len(pts) <= 85
        assert len(pts) <= weak_bound(2, 64, 16)


def test_weak_exact_mode_small():
    rng = np.random.default_rng(6)
    for fam, p, q in certified_instances(rng, 20, lambda p, q: q >= 3, n_range=(6, 13)):
        rep = solve(fam, "weak", p, q, c=Fraction(7, 2))
        assert covers(fam, rep.transversal) and rep.certified
        assert len(rep) <= rep.claimed_bound == p - q + 1 + p2_bound(2, max(2, 2 * p // q))


# -- main rectangle algorithm ---------------------------------------------

def test_rect_main_remark_tight():
    inst = gen_remark_family(128, 49, 200, 2, seed=0)
    rep = pierce_rect_main(inst.family, 128, 49, BIG)
    assert len(rep) == 80 and rep.certified and covers(inst.family, rep.transversal)


def test_rect_main_all_q_equals_p_gives_one_point():
    rep = pierce_rect_main(clique(40), 37, 37)
    assert len(rep) == 1


def test_rect_main_out_of_range():
    with pytest.raises(OutOfRange):
        pierce_rect_main(clique(200), 128, 48)


def test_rect_main_detects_violation():
    with pytest.raises(PropertyViolation):
        pierce_rect_main(disjoint(40), 37, 37, BIG)


def test_rect_main_dichotomy_path():
    # (4096, 84) is the smallest scale where p >= C(q+1, 2) and q >= 7 log2 p
    inst = gen_clique_union(40, 4096, 2, seed=1)
    rep = pierce_rect_main(inst.family, 4096, 84, HEUR)
    steps = [t[0] for t in rep.trace]
    assert "rect-main/dichotomy" in steps and "weak" in steps
    assert not rep.certified
    assert len(rep) <= 4096 - 84 + 1 and covers(inst.family, rep.transversal)


def test_trace_is_post_order():
    inst = gen_remark_family(64, 45, 80, 2, seed=1)
    rep = pierce_rect_main(inst.family, 64, 45, BIG)
    assert rep.trace[-1][0] == "dol2"
    assert len(rep) == 20


# -- generic engine -------------------------------------------------------

def test_generic_pairwise_intersecting():
    rep = pierce_generic_engine(clique(210, d=3), 200, 200, ThresholdFn.log2(2))
    assert len(rep) == 1 and rep.certified


def test_generic_remark_3d():
    inst = gen_remark_family(600, 400, 700, 3, seed=0)
    rep = pierce_generic_engine(inst.family, 600, 400, ThresholdFn.log2(), cfg=BIG)
    assert len(rep) == 201 and covers(inst.family, rep.transversal)


def test_generic_threshold_errors():
    inst = gen_remark_family(600, 400, 700, 3, seed=0)
    with pytest.raises(OutOfRange) as err:
        pierce_generic_engine(inst.family, 600, 400, ThresholdFn.log2(2))
    assert str(compute_Tc(ThresholdFn.log2(2), 600)) in str(err.value)
    with pytest.raises(InvalidInput):
        pierce_generic_engine(inst.family, 600, 400, ThresholdFn.log2(c=50))
    with pytest.raises(InvalidInput):
        pierce_generic_engine(inst.family, 600, 400, ThresholdFn.const(1))


def test_generic_clique_union_smallest_admitted():
    f = ThresholdFn.log2(2)
    for k in (1, 2, 3):
        p = next(p for p in range(200, 20000) if compute_Tc(f, p) and -(-p // k) >= compute_Tc(f, p))
        q = compute_Tc(f, p)
        inst = gen_clique_union(k, p, 3, seed=k)
        rep = pierce_generic_engine(inst.family, p, q, f, cfg=HEUR)
        assert len(rep) <= p - q + 1 and covers(inst.family, rep.transversal)


def test_generic_custom_p2_handle():
    calls = []

    def handle(lo, hi, p, cfg):
        calls.append(p)
        return lo[:], False

    inst = gen_clique_union(2, 1599, 3, seed=0)
    rep = pierce_generic_engine(inst.family, 1599, 800, ThresholdFn.log2(2), p2=handle, cfg=HEUR)
    assert calls and not rep.certified and covers(inst.family, rep.transversal)


# -- dispatcher -----------------------------------------------------------

def test_solve_dispatch_and_errors():
    inst = gen_remark_family(6, 4, 10, 2, seed=0)
    for alg in ("dol1", "dol2", "cute", "weak"):
        rep = solve(inst.family, alg, 6, 4)
        assert covers(inst.family, rep.transversal)
    with pytest.raises(InvalidInput):
        solve(inst.family, "magic", 6, 4)
    with pytest.raises(InvalidInput):
        solve(inst.family, "dol1", None, None)
    with pytest.raises(InvalidInput):
        solve(inst.family, "dol1", 12, 4)
