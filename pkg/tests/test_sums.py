import pytest

from mslab.descriptor import is_isomorphic, surface_of, validate
from mslab.errors import OrientationTypeMismatch
from mslab.fixtures import golden
from mslab.sums import connected_sum


def euler(d):
    n0, n1, n2 = d.counts()
    return n0 - n1 + n2


def test_sum_with_the_sphere_is_trivial():
    F, ns = golden("F1_torus"), golden("north_south")
    assert is_isomorphic(connected_sum(F, "omega", ns, "alpha"), F)
    assert is_isomorphic(connected_sum(ns, "omega", F, "alpha"), F)


def test_euler_characteristic_is_additive():
    F = golden("F1_torus")
    s = connected_sum(F, "omega", F, "alpha")
    assert validate(s) == []
    assert euler(s) == 2 * euler(F) - 2
    assert surface_of(s) == (True, 2)


def test_sum_is_associative():
    p = golden("psi1")
    a = connected_sum(connected_sum(p, "omega", p, "alpha"), "omega", p, "alpha")
    b = connected_sum(p, "omega", connected_sum(p, "omega", p, "alpha"), "alpha")
    assert is_isomorphic(a, b)
    assert surface_of(a) == (True, 3)


def test_sum_needs_a_sink_and_a_source():
    with pytest.raises(ValueError, match="sink of the first"):
        connected_sum(golden("psi0"), "omega0", golden("psi1"), "sigma1")


def test_orientation_types_must_agree():
    with pytest.raises(OrientationTypeMismatch):
        connected_sum(golden("xi0"), "omega0", golden("psi1"), "alpha")


def test_default_interleaving_is_recorded():
    p = golden("psi1")
    s = connected_sum(p, "omega", p, "alpha")
    assert len(s.meta["interleaving"]) == len(p.rotation[p.orbit_by_id["omega"].points[0]]) * 2
