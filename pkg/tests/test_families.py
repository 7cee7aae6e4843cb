import pytest

from mslab.descriptor import surface_of, validate
from mslab.families import FAMILIES, FAMILY_MIN, build

# frozen: family -> n -> (points (sinks, saddles, sources), saddle periods, surface)
INVENTORY = {
    "fg": {0: ((2, 2, 2), [2], (True, 0)), 1: ((2, 4, 2), [2, 2], (True, 1)),
           3: ((2, 8, 2), [2] * 4, (True, 3))},
    "ftq": {1: ((2, 3, 2), [1, 2], (False, 1)), 2: ((2, 4, 2), [1, 1, 2], (False, 2))},
    "xig": {1: ((2, 4, 2), [1] * 4, (True, 1)), 2: ((2, 6, 2), [1] * 6, (True, 2))},
    "xitq": {1: ((2, 3, 2), [1] * 3, (False, 1)), 3: ((2, 5, 2), [1] * 5, (False, 3))},
}


@pytest.mark.parametrize("family,n", [(f, n) for f, rows in INVENTORY.items() for n in rows])
def test_inventory(family, n):
    d = build(family, n)
    counts, periods, surface = INVENTORY[family][n]
    assert validate(d) == []
    assert d.counts() == counts
    assert sorted(o.period for o in d.saddle_orbits()) == periods
    assert surface_of(d) == surface


@pytest.mark.parametrize("family", ["xig", "xitq"])
def test_xi_families_have_positive_saddles(family):
    d = build(family, 2)
    assert {o.orientation_type for o in d.saddle_orbits()} == {(1, 1)}


def test_ftilde_keeps_the_negative_saddles():
    d = build("ftq", 3)
    types = sorted(o.orientation_type for o in d.saddle_orbits())
    assert types == [(-1, -1)] * 3 + [(1, 1)]


@pytest.mark.parametrize("family", FAMILIES)
def test_below_range_is_rejected(family):
    with pytest.raises(ValueError):
        build(family, FAMILY_MIN[family] - 1)


def test_unknown_family():
    with pytest.raises(KeyError):
        build("nope", 1)
