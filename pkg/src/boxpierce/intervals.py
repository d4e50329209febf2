"""1-D piercing by the right-endpoint sweep."""
import numpy as np

from . import kernels
from .errors import InternalError, InvalidInput
from .geometry import BoxFamily


def stab_ranks(lo, hi) -> np.ndarray:
    """Stab points (as (k, 1) rank rows) for 1-column rank arrays."""
    return kernels.stab_intervals(lo[:, 0], hi[:, 0]).reshape(-1, 1)


def pierce_intervals(fam: BoxFamily) -> list:
    """Minimum transversal of a family of closed intervals.

    Points sit on upper endpoints, so they stay on the input's own grid.
    The size equals the packing number, which is optimal in one dimension.
    """
    if fam.dim != 1:
        raise InvalidInput(f"pierce_intervals needs dim 1, got {fam.dim}")
    pts = stab_ranks(fam.lo_ranks, fam.hi_ranks)
    if not kernels.covered_mask(fam.lo_ranks, fam.hi_ranks, pts).all():
        raise InternalError("interval sweep left an interval unpierced")
    return [fam.point_from_ranks(r) for r in pts]
