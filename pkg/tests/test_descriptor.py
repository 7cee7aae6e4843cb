import dataclasses

import pytest

from mslab.descriptor import is_isomorphic, is_valid, power, reorient, surface_of, validate
from mslab.families import psi_g, psitilde_q
from mslab.fixtures import GOLDEN, golden


def with_end(d, eid, **changes):
    ends = dict(d.ends)
    ends[eid] = dataclasses.replace(ends[eid], **changes)
    return dataclasses.replace(d, ends=ends)


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_fixtures_validate(name):
    assert validate(golden(name)) == []


def test_unstable_branch_at_source_is_a_violation():
    d = with_end(golden("psi0"), "s:u+", node="N")
    assert any("unstable branch must end at sink" in v for v in validate(d))


def test_period_mismatch_is_a_violation():
    d = golden("psi0")
    orbits = tuple(dataclasses.replace(o, period=1) if o.id == "sigma" else o for o in d.orbits)
    assert not is_valid(dataclasses.replace(d, orbits=orbits))


def test_smale_cycle_is_a_violation():
    d = golden("xi0")
    d = with_end(d, "p:s+", node=None, heteroclinic=("p0", "u+"))
    d = with_end(d, "p0:u+", node=None, heteroclinic=("p", "s+"))
    assert any("cycle" in v or "irreflexive" in v or "commute" in v for v in validate(d))


SURFACES = {  # frozen: (orientable, genus)
    "psi0": (True, 0), "north_south": (True, 0), "xi0": (True, 0),
    "psitilde1": (False, 1), "F1_torus": (True, 1), "psi1": (True, 1),
}


@pytest.mark.parametrize("name", sorted(SURFACES))
def test_surface_of_golden(name):
    assert surface_of(golden(name)) == SURFACES[name]


@pytest.mark.parametrize("g", [1, 2, 3])
def test_surface_of_psi_g(g):
    assert surface_of(psi_g(g)) == (True, g)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_surface_of_psitilde_q(q):
    assert surface_of(psitilde_q(q)) == (False, q)


def test_power_one_is_identity():
    d = golden("psi0")
    assert power(d, 1) is d


def test_power_two_splits_the_saddle_orbit():
    d = power(golden("psi0"), 2)
    saddles = [o for o in d.orbits if o.kind == "saddle"]
    assert [o.period for o in saddles] == [1, 1]
    # nodes with varsigma = -1 become positive
    assert all(o.orientation_type == (1,) for o in d.orbits if o.kind != "saddle")


def test_power_of_psi_g_is_positive():
    d = power(psi_g(2), 2)
    saddles = [o for o in d.orbits if o.kind == "saddle"]
    assert len(saddles) == 4
    assert all(o.positive for o in d.orbits)


def test_isomorphism_ignores_names():
    d = golden("psi1")
    assert is_isomorphic(d, dataclasses.replace(d, name="other"))


def test_isomorphism_sees_twists():
    d = golden("psitilde1")
    assert not is_isomorphic(d, with_end(d, "s:u-", twist=1))


def test_isomorphism_distinguishes_models():
    assert not is_isomorphic(golden("F1_torus"), golden("psi1"))


def test_reorient_keeps_the_isomorphism_class():
    d = golden("psi0")
    e = reorient(d, "w0")
    assert validate(e) == []
    assert is_isomorphic(d, e)
