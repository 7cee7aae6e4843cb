import pytest

from mslab.charspace import (
    corollary_conformance,
    dual_consistent,
    enumerate_valid_sigma,
    has_connected_charspace,
    is_valid_sigma,
    summarize,
    tier1,
    tier2,
)
from mslab.errors import CaseViolation, NotGradientLikeSigma
from mslab.families import FAMILIES, FAMILY_MIN, build
from mslab.fixtures import GOLDEN, golden


def table(d):
    _, cert = has_connected_charspace(d)
    return {tuple(sorted(sig.orbits)): s.describe() for sig, s in cert.rows}


# frozen decision tables
def test_psi0_table():
    assert table(golden("psi0")) == {(): "K + K", ("sigma",): "K + K"}


def test_xi0_table():
    assert table(golden("xi0")) == {(): "T + T", ("sigma0",): "T + T + T", ("sigma", "sigma0"): "T + T"}


def test_F1_table():
    assert table(golden("F1_torus")) == {(): "T", ("sigma1",): "T + T", ("sigma2",): "T + T",
                                         ("sigma1", "sigma2"): "T"}


def test_xitilde1_table():
    assert table(build("xitq", 1)) == {
        (): "T + T", ("sigma0",): "T + T + T", ("sigma1",): "T + T", ("sigma", "sigma0"): "T + T",
        ("sigma0", "sigma1"): "T + T + T", ("sigma", "sigma0", "sigma1"): "T + T"}


def test_xi1_has_twelve_valid_sigma():
    t = table(build("xig", 1))
    assert len(t) == 12
    assert t[("sigma0", "sigma1.0")] == "T + T + T + T"


def test_sigma_without_sigma0_is_invalid():
    d = golden("xi0")
    assert not is_valid_sigma(d, {"sigma"})
    assert is_valid_sigma(d, {"sigma0"})


@pytest.mark.parametrize("name,connected", [("psi1", True), ("F1_torus", True), ("north_south", True),
                                            ("psitilde1", True), ("psi0", False), ("xi0", False)])
def test_decision_on_golden(name, connected):
    assert has_connected_charspace(golden(name))[0] is connected


def test_count_and_set_count():
    s = summarize(golden("psi1"), ())
    assert (s.count, s.set_count) == (1, 1)
    s = summarize(golden("xi0"), {"sigma0"})
    assert (s.count, s.set_count) == (3, 3)


def descriptors():
    return [golden(n) for n in sorted(GOLDEN)] + [
        build(f, n) for f in FAMILIES for n in range(max(1, FAMILY_MIN[f]), 3)]


def test_tiers_agree():
    n = 0
    for d in descriptors():
        for sig in enumerate_valid_sigma(d):
            a = tier1(d, sig.orbits)
            if a is not None:
                assert a.signature() == tier2(d, sig.orbits, check=False).signature(), (d.name, sig)
                n += 1
    assert n >= 100


def test_dual_pictures_agree():
    n = 0
    for d in descriptors():
        for sig in enumerate_valid_sigma(d):
            try:
                assert dual_consistent(d, sig.orbits), (d.name, sig)
                n += 1
            except NotGradientLikeSigma:
                pass
    assert n >= 50


def test_repeller_picture_needs_gradient_like_sigma():
    with pytest.raises(NotGradientLikeSigma):
        dual_consistent(golden("xi0"), frozenset())


def test_conformance_clean_on_xi_families():
    for d in (golden("xi0"), build("xig", 1), build("xitq", 1), build("ftq", 1)):
        assert corollary_conformance(d).violations == ()


def test_conformance_violation_frozen():
    # the (+1,+1) period-2 saddle of psi1 joins a Klein bottle to itself;
    # the case list has no K -> K entry for that type
    (t,) = corollary_conformance(golden("psi1")).violations
    assert (t.orbit, t.orientation_type, t.before, t.after) == ("sigma1", (1, 1), ("K",), ("K",))


def test_checked_surgery_raises_on_violation():
    with pytest.raises(CaseViolation):
        tier2(golden("psi1"), {"sigma1"}, check=True)
