"""Stand-alone transversal checker.

Works straight from the JSON objects with ``fractions.Fraction`` and shares no
code with the solvers, so a solver bug cannot hide behind its own checks.
"""
from fractions import Fraction


def _rat(v):
    if isinstance(v, bool) or isinstance(v, float):
        raise ValueError(f"bad coordinate {v!r}")
    return Fraction(v)


def verify_objects(instance: dict, transversal: dict):
    """(ok, message, uncovered box indices)."""
    try:
        dim = int(instance["dim"])
        boxes = [([_rat(v) for v in b["lo"]], [_rat(v) for v in b["hi"]]) for b in instance["boxes"]]
        points = [[_rat(v) for v in p] for p in transversal["points"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return False, f"unreadable input: {exc}", []
    for i, (lo, hi) in enumerate(boxes):
        if len(lo) != dim or len(hi) != dim or any(a > b for a, b in zip(lo, hi)):
            return False, f"box {i} is malformed", []
    for j, p in enumerate(points):
        if len(p) != dim:
            return False, f"point {j} has {len(p)} coordinates, expected {dim}", []
    missed = [i for i, (lo, hi) in enumerate(boxes)
              if not any(all(a <= x <= b for a, x, b in zip(lo, p, hi)) for p in points)]
    if missed:
        return False, f"{len(missed)} of {len(boxes)} boxes unpierced (first: {missed[0]})", missed
    return True, f"ok: {len(points)} points pierce all {len(boxes)} boxes", []
