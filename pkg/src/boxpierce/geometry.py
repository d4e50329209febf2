"""Closed axis-parallel boxes with exact rational coordinates.

Every predicate in this package depends only on the relative order of
coordinates along each axis.  A :class:`BoxFamily` therefore keeps, next to
its ``Fraction`` boxes, an order-preserving integer rank table per axis; the
numeric kernels run on those int64 ranks and results are mapped back to exact
rationals.  Nothing is ever rounded.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidInput

Point = tuple  # tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` or ``"0.25"``.

    Floats are refused: a binary float rarely means the rational the user
    had in mind, and tangency decisions hinge on exact values.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    raise InvalidInput(f"not a rational (use int, Fraction or str): {x!r}")


def as_point(coords) -> Point:
    return tuple(as_rational(c) for c in coords)


@dataclass(frozen=True)
class AxisBox:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(as_rational(v) for v in self.lo)
        hi = tuple(as_rational(v) for v in self.hi)
        if not lo or len(lo) != len(hi):
            raise InvalidInput(f"box needs matching nonempty lo/hi, got {len(lo)} and {len(hi)}")
        for i, (a, b) in enumerate(zip(lo, hi)):
            if a > b:
                raise InvalidInput(f"box has lo > hi on axis {i}: {a} > {b}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, point: Sequence) -> bool:
        if len(point) != self.dim:
            raise InvalidInput(f"point has {len(point)} coords, box has dim {self.dim}")
        return all(a <= x <= b for a, x, b in zip(self.lo, point, self.hi))

    def corner(self) -> Point:
        """Canonical piercing point of a single box (its lower corner)."""
        return self.lo


class BoxFamily:
    """Indexed, immutable list of boxes sharing one dimension."""

    def __init__(self, boxes: Iterable):
        items = []
        for b in boxes:
            if not isinstance(b, AxisBox):
                b = AxisBox(*b)
            items.append(b)
        if not items:
            raise InvalidInput("a box family must be nonempty")
        d = items[0].dim
        for i, b in enumerate(items):
            if b.dim != d:
                raise InvalidInput(f"box {i} has dim {b.dim}, family has dim {d}")
        self.boxes = tuple(items)
        self.dim = d

    def __len__(self):
        return len(self.boxes)

    def __getitem__(self, i):
        return self.boxes[i]

    def __iter__(self):
        return iter(self.boxes)

    def __eq__(self, other):
        return isinstance(other, BoxFamily) and self.boxes == other.boxes

    def __hash__(self):
        return hash(self.boxes)

    def __repr__(self):
        return f"BoxFamily(n={len(self)}, dim={self.dim})"

    @cached_property
    def _ranked(self):
        values = []
        lo = np.empty((len(self), self.dim), dtype=np.int64)
        hi = np.empty((len(self), self.dim), dtype=np.int64)
        for ax in range(self.dim):
            vals = sorted({b.lo[ax] for b in self.boxes} | {b.hi[ax] for b in self.boxes})
            rank = {v: r for r, v in enumerate(vals)}
            lo[:, ax] = [rank[b.lo[ax]] for b in self.boxes]
            hi[:, ax] = [rank[b.hi[ax]] for b in self.boxes]
            values.append(tuple(vals))
        lo.setflags(write=False)
        hi.setflags(write=False)
        return lo, hi, tuple(values)

    @property
    def lo_ranks(self) -> np.ndarray:
        return self._ranked[0]

    @property
    def hi_ranks(self) -> np.ndarray:
        return self._ranked[1]

    def axis_values(self, axis: int) -> tuple:
        """Sorted distinct coordinates on ``axis``; index = rank."""
        return self._ranked[2][axis]

    def point_from_ranks(self, ranks, axes=None) -> Point:
        axes = range(self.dim) if axes is None else axes
        return tuple(self._ranked[2][ax][int(r)] for ax, r in zip(axes, ranks))

    def encode_point(self, point: Sequence) -> np.ndarray:
        """Map an arbitrary rational point into doubled-rank space.

        Table values land on even integers ``2r``; values strictly between
        two table entries land on the odd integer between them.  Comparing
        against ``2 * lo_ranks`` / ``2 * hi_ranks`` is then exact.
        """
        if len(point) != self.dim:
            raise InvalidInput(f"point has {len(point)} coords, family has dim {self.dim}")
        out = np.empty(self.dim, dtype=np.int64)
        for ax, v in enumerate(as_point(point)):
            vals = self._ranked[2][ax]
            k = bisect_left(vals, v)
            out[ax] = 2 * k if k < len(vals) and vals[k] == v else 2 * k - 1
        return out

    def subfamily(self, indices) -> "BoxFamily":
        return BoxFamily([self.boxes[int(i)] for i in indices])


def _check_indices(fam: BoxFamily, indices) -> list:
    idx = [int(i) for i in indices]
    for i in idx:
        if not 0 <= i < len(fam):
            raise InvalidInput(f"index {i} out of range for family of size {len(fam)}")
    return idx


def boxes_intersect(a: AxisBox, b: AxisBox) -> bool:
    """Closed-box overlap; touching boundaries count."""
    if a.dim != b.dim:
        raise InvalidInput(f"dimension mismatch: {a.dim} vs {b.dim}")
    return all(max(al, bl) <= min(ah, bh) for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi))


def clique_common_point(fam: BoxFamily, indices) -> Optional[Point]:
    """Per-axis max of the lower bounds, if it lies in every selected box.

    Returns ``None`` when the selected boxes have no common point, which for
    boxes happens exactly when some pair of them is disjoint.
    """
    idx = _check_indices(fam, indices)
    if not idx:
        raise InvalidInput("clique_common_point needs at least one index")
    pt = []
    for ax in range(fam.dim):
        top = max(fam[i].lo[ax] for i in idx)
        if top > min(fam[i].hi[ax] for i in idx):
            return None
        pt.append(top)
    return tuple(pt)


def restrict_to_hyperplane(fam: BoxFamily, axis: int, value):
    """Boxes crossing ``x[axis] == value``, with that axis dropped.

    Returns ``(family, index_map)`` where ``index_map[j]`` is the index in
    ``fam`` of output box ``j``.  ``family`` is ``None`` if nothing crosses.
    """
    if fam.dim < 2:
        raise InvalidInput("cannot restrict a 1-dimensional family to a hyperplane")
    if not 0 <= axis < fam.dim:
        raise InvalidInput(f"axis {axis} out of range for dim {fam.dim}")
    v = as_rational(value)
    keep = [i for i, b in enumerate(fam) if b.lo[axis] <= v <= b.hi[axis]]
    if not keep:
        return None, []
    out = BoxFamily(
        AxisBox(b.lo[:axis] + b.lo[axis + 1:], b.hi[:axis] + b.hi[axis + 1:])
        for b in (fam[i] for i in keep)
    )
    return out, keep


def lift_point(point: Sequence, axis: int, value) -> Point:
    """Inverse of the hyperplane restriction for points."""
    p = tuple(point)
    return p[:axis] + (as_rational(value),) + p[axis:]


def uncovered(fam: BoxFamily, points: Sequence) -> list:
    """Indices of boxes containing none of ``points`` (exact Fractions)."""
    pts = [as_point(p) for p in points]
    for p in pts:
        if len(p) != fam.dim:
            raise InvalidInput(f"point {p} has wrong dimension for family of dim {fam.dim}")
    return [i for i, b in enumerate(fam) if not any(b.contains(p) for p in pts)]


def pierces(fam: BoxFamily, points: Sequence) -> bool:
    return not uncovered(fam, points)

