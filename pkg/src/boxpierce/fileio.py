"""JSON instance and transversal files.  Rationals travel as strings ("3/4")."""
import json
from fractions import Fraction

from .errors import InvalidInput
from .geometry import AxisBox, BoxFamily, as_rational


def rat_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(v) -> Fraction:
    if isinstance(v, float):
        raise InvalidInput(f"JSON number {v!r} is a float; write rationals as strings like \"3/4\"")
    return as_rational(v)


def instance_to_json(fam: BoxFamily, meta=None) -> dict:
    out = {"dim": fam.dim,
           "boxes": [{"lo": [rat_str(v) for v in b.lo], "hi": [rat_str(v) for v in b.hi]} for b in fam]}
    if meta:
        out["meta"] = meta
    return out


def instance_from_json(obj) -> tuple:
    """(BoxFamily, meta dict)."""
    try:
        dim = obj["dim"]
        boxes = [AxisBox(tuple(parse_rational(v) for v in b["lo"]), tuple(parse_rational(v) for v in b["hi"]))
                 for b in obj["boxes"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed instance: {exc}") from exc
    fam = BoxFamily(boxes)
    if fam.dim != dim:
        raise InvalidInput(f"instance declares dim {dim} but boxes have dim {fam.dim}")
    return fam, obj.get("meta") or {}


def transversal_to_json(points, produced_by="", claimed_bound=None, certified=False) -> dict:
    return {"points": [[rat_str(v) for v in p] for p in points], "produced_by": produced_by,
            "claimed_bound": claimed_bound, "certified": bool(certified)}


def transversal_from_json(obj) -> list:
    try:
        return [tuple(parse_rational(v) for v in p) for p in obj["points"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed transversal: {exc}") from exc


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc


def dump_json(obj, path=None):
    text = json.dumps(obj, indent=1)
    if path is None or path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def load_instance(path):
    return instance_from_json(load_json(path))


def save_instance(fam, path, meta=None):
    dump_json(instance_to_json(fam, meta), path)
