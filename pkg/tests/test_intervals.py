import numpy as np
import pytest

from boxpierce.errors import InvalidInput
from boxpierce.geometry import AxisBox, BoxFamily
from boxpierce.intervals import pierce_intervals
from boxpierce.oracles import packing, piercing_number

from conftest import covers, random_family


def iv(*pairs):
    return BoxFamily(AxisBox((a,), (b,)) for a, b in pairs)


def test_disjoint_intervals():
    assert len(pierce_intervals(iv((0, 1), (2, 3), (4, 5)))) == 3


def test_common_point_at_upper_endpoint():
    assert pierce_intervals(iv((0, 2), (1, 3), (2, 4))) == [(2,)]


def test_needs_dim_one():
    with pytest.raises(InvalidInput):
        pierce_intervals(BoxFamily([AxisBox((0, 0), (1, 1))]))


def test_optimal_and_equal_to_packing():
    rng = np.random.default_rng(5)
    for _ in range(200):
        fam = random_family(rng, int(rng.integers(1, 19)), 1, grid=50, max_side=12)
        pts = pierce_intervals(fam)
        assert covers(fam, pts)
        assert len(pts) == piercing_number(fam)[0] == len(packing(fam))
