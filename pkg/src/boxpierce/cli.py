"""Command line: gen, pierce, exact, verify, bounds, bench.

Exit codes: 0 ok, 1 usage or out-of-range parameters, 2 bound violated on a
certified run with --assert-bound, 3 invalid instance or failed verify,
4 property violation detected.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import CapExceeded, InvalidInput, OutOfRange, PropertyViolation
from .fileio import (dump_json, instance_to_json, load_instance, load_json, rat_str,
                     transversal_to_json)
from .generators import gen_clique_union, gen_no_p2_family, gen_random_p2, gen_remark_family
from .oracles import OracleConfig, check_pq_property, max_depth, packing, piercing_number
from .p2 import eq1_closed_form, p2_bound
from .pipeline import ALGORITHMS, solve
from .thresholds import ThresholdFn, compute_Tc
from .verify import verify_objects

EXIT_OK, EXIT_USAGE, EXIT_BOUND, EXIT_INVALID, EXIT_PROPERTY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _cfg(args) -> OracleConfig:
    if args.cap is None:
        return OracleConfig(mode=args.mode)
    return OracleConfig(exact_size_cap=args.cap, packing_cap=args.cap, mode=args.mode)


def _pts(points):
    return [[rat_str(v) for v in p] for p in points]


def _pq_from(args, meta):
    p = args.p if args.p is not None else meta.get("p")
    q = args.q if args.q is not None else meta.get("q")
    return p, q


# -- subcommands -----------------------------------------------------------

def cmd_gen(args):
    if args.kind == "remark":
        inst = gen_remark_family(args.p, args.q, args.n, args.d, args.seed)
    elif args.kind == "clique-union":
        inst = gen_clique_union(args.k, args.n, args.d, args.spread, args.seed)
        if args.p is not None:
            inst.p, inst.q = args.p, args.q if args.q is not None else -(-args.p // args.k)
    elif args.kind == "random-p2":
        inst = gen_random_p2(args.p, args.n, args.d, args.seed, _cfg(args))
    else:
        inst = gen_no_p2_family(args.m)
    dump_json(instance_to_json(inst.family, inst.meta()), args.out)
    return EXIT_OK


def cmd_pierce(args):
    fam, meta = load_instance(args.instance)
    p, q = _pq_from(args, meta)
    tf = None if args.f is None else ThresholdFn.parse(args.f)
    rep = solve(fam, args.alg, p, q, Fraction(args.c), tf, _cfg(args))
    dump_json(transversal_to_json(rep.transversal, args.alg, rep.claimed_bound, rep.certified), args.out)
    print(f"{args.alg}: {len(rep)} points, bound {rep.claimed_bound}, certified={rep.certified}", file=sys.stderr)
    if args.assert_bound and rep.certified and len(rep) > rep.claimed_bound:
        print(f"bound violated: {len(rep)} > {rep.claimed_bound}", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_exact(args):
    fam, meta = load_instance(args.instance)
    cfg = _cfg(args)
    if args.what == "depth":
        dep, wit = max_depth(fam)
        out = {"depth": dep, "witness": _pts([wit])[0]}
    elif args.what == "nu":
        res = packing(fam, cfg)
        out = {"nu": len(res), "indices": list(res.indices), "maximum": res.maximum}
    elif args.what == "tau":
        tau, pts = piercing_number(fam, cfg)
        out = {"tau": tau, "transversal": _pts(pts)}
    else:
        p, q = _pq_from(args, meta)
        if p is None or q is None:
            raise UsageError("check-pq needs --p and --q")
        v = check_pq_property(fam, p, q, cfg)
        out = {"verdict": v.kind, "bad_set": None if v.bad_set is None else list(v.bad_set)}
    dump_json(out, args.out)
    return EXIT_OK


def cmd_verify(args):
    ok, msg, _ = verify_objects(load_json(args.instance), load_json(args.transversal))
    print(msg)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_bounds(args):
    rows = []
    for p in args.p:
        row = {"p": p}
        if args.eq1:
            row["eq1"] = eq1_closed_form(p)
        if args.d is not None:
            row[f"B_{args.d}"] = p2_bound(args.d, p)
        if args.tc:
            row["T_c"] = compute_Tc(ThresholdFn.parse(args.f, args.c), p)
        rows.append(row)
    keys = [k for k in rows[0] if k != "p"]
    if not keys:
        raise UsageError("bounds: choose at least one of --eq1, --d, --tc")
    if len(rows) == 1 and len(keys) == 1:
        print(rows[0][keys[0]])
    else:
        print("\t".join(["p"] + keys))
        for r in rows:
            print("\t".join(str(r[k]) for k in ["p"] + keys))
    return EXIT_OK


def _default_suite():
    heur = OracleConfig(mode="heuristic")
    big = OracleConfig(exact_size_cap=24, packing_cap=10 ** 6)
    for p, q in [(37, 37), (64, 45), (128, 49), (256, 56)]:
        yield f"remark-{p}-{q}", gen_remark_family(p, q, p + 32, 2, 0).family, "rect-main", p, q, big, None
    yield "clique-union-48x4096", gen_clique_union(48, 4096, 2, seed=0).family, "rect-main", 4096, 84, heur, None
    yield "clique-union-4x64", gen_clique_union(4, 64, 2, seed=0).family, "weak", 64, 16, heur, None
    yield "remark-6-4", gen_remark_family(6, 4, 10, 2, 0).family, "dol1", 6, 4, OracleConfig(), None
    yield "random-p2-5x20", gen_random_p2(5, 20, 2, 0).family, "p2", 5, 2, OracleConfig(), None
    # log2 rather than the d=3 default log2^2: T_100(600) is 354 for log2, 433 for log2^2
    yield ("remark-3d-600-400", gen_remark_family(600, 400, 700, 3, 0).family, "generic", 600, 400, heur,
           ThresholdFn.log2())


def cmd_bench(args):
    if args.instances:
        if args.alg is None:
            raise UsageError("bench with instance files needs --alg")
        runs = []
        for path in args.instances:
            fam, meta = load_instance(path)
            p, q = _pq_from(args, meta)
            tf = None if args.f is None else ThresholdFn.parse(args.f)
            runs.append((path, fam, args.alg, p, q, _cfg(args), tf))
    else:
        runs = list(_default_suite())
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.writer(fh)
        w.writerow(["instance", "algorithm", "n", "p", "q", "size", "bound", "certified", "millis"])
        for name, fam, alg, p, q, cfg, tf in runs:
            t0 = time.perf_counter()
            rep = solve(fam, alg, p, q, Fraction(args.c), tf, cfg)
            ms = (time.perf_counter() - t0) * 1000
            w.writerow([name, alg, len(fam), p, q, len(rep), rep.claimed_bound, rep.certified, f"{ms:.1f}"])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="raise both exact oracle caps to this n")
    common.add_argument("-o", "--out", default=None, help="output file (default stdout)")

    ap = _Parser(prog="boxpierce", description="Piercing sets for axis-parallel boxes.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance")
    gsub = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    r = gsub.add_parser("remark", parents=[common])
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--d", type=int, default=2)
    cu = gsub.add_parser("clique-union", parents=[common])
    cu.add_argument("--k", type=int, required=True)
    cu.add_argument("--n", type=int, required=True)
    cu.add_argument("--d", type=int, default=2)
    cu.add_argument("--spread", type=int, default=8)
    cu.add_argument("--p", type=int, default=None, help="record p (and q, default ceil(p/k)) in meta")
    cu.add_argument("--q", type=int, default=None)
    rp = gsub.add_parser("random-p2", parents=[common])
    rp.add_argument("--p", type=int, required=True)
    rp.add_argument("--n", type=int, required=True)
    rp.add_argument("--d", type=int, default=2)
    npp = gsub.add_parser("no-p2", parents=[common])
    npp.add_argument("--m", type=int, required=True)
    g.set_defaults(func=cmd_gen)

    pc = sub.add_parser("pierce", parents=[common], help="compute a transversal")
    pc.add_argument("instance")
    pc.add_argument("--alg", choices=ALGORITHMS, required=True)
    pc.add_argument("--p", type=int)
    pc.add_argument("--q", type=int)
    pc.add_argument("--c", default="7/2", help="weak-pipeline constant (rational)")
    pc.add_argument("--f", default=None, help="threshold function for --alg generic, e.g. log2^2")
    pc.add_argument("--assert-bound", action="store_true")
    pc.set_defaults(func=cmd_pierce)

    ex = sub.add_parser("exact", parents=[common], help="exact oracles")
    ex.add_argument("what", choices=["tau", "nu", "depth", "check-pq"])
    ex.add_argument("instance")
    ex.add_argument("--p", type=int)
    ex.add_argument("--q", type=int)
    ex.set_defaults(func=cmd_exact)

    v = sub.add_parser("verify", help="check a transversal against an instance")
    v.add_argument("instance")
    v.add_argument("transversal")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="bound tables")
    b.add_argument("--p", type=int, nargs="+", required=True)
    b.add_argument("--eq1", action="store_true", help="closed form p*ceil(log2 p) - 2^ceil(log2 p) + 1")
    b.add_argument("--d", type=int, help="B_d(p) from the recurrence")
    b.add_argument("--tc", action="store_true", help="T_c(p)")
    b.add_argument("--f", default="log2")
    b.add_argument("--c", default="100")
    b.set_defaults(func=cmd_bounds)

    bn = sub.add_parser("bench", parents=[common], help="timed runs, CSV output")
    bn.add_argument("instances", nargs="*")
    bn.add_argument("--alg", choices=ALGORITHMS)
    bn.add_argument("--p", type=int)
    bn.add_argument("--q", type=int)
    bn.add_argument("--c", default="7/2")
    bn.add_argument("--f", default=None)
    bn.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OutOfRange, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PropertyViolation as exc:
        print(f"property violation: {exc}; witness {list(exc.witness)}", file=sys.stderr)
        return EXIT_PROPERTY
    except (InvalidInput, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
