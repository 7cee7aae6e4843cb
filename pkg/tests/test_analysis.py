from collections import Counter

import numpy as np
import pytest

from mslab.analysis import (
    _sign_change_cells, charspace_oracle, classify, crossings, find_periodic_points, saddle_frame,
)
from mslab.charspace import enumerate_valid_sigma, summarize
from mslab.descriptor import SADDLE, is_isomorphic, validate
from mslab.errors import NonHyperbolic
from mslab.fixtures import golden
from mslab.models import BASE_MODELS, get_model


def inventory(recs):
    return Counter((r.kind, r.period, r.orientation_type) for r in recs)


def test_psi0_periodic_points():
    recs = find_periodic_points(get_model("psi0"), max_period=2)
    assert inventory(recs) == Counter({
        ("source", 1, (-1,)): 2, ("sink", 1, (-1,)): 2, ("saddle", 2, (1, 1)): 2,
    })


def test_xi0_fixed_points():
    recs = find_periodic_points(get_model("xi0"), max_period=1)
    assert len(recs) == 6
    assert all(all(x > 0 for x in r.orientation_type) for r in recs)


def test_psitilde1_fixed_points():
    recs = find_periodic_points(get_model("psitilde1"), max_period=1)
    assert sorted(r.kind for r in recs) == ["saddle", "sink", "source"]
    saddle = next(r for r in recs if r.kind == SADDLE)
    assert saddle.orientation_type == (-1, -1)


def test_psi0_sink_eigenvalues():
    # frozen: e^-2 and e^-1 at the sinks (+-1, 0) of the plane picture
    rec = classify(get_model("psi0"), np.array([1.0, 0.0, 0.0]), 1)
    assert rec.kind == "sink"
    assert np.allclose(np.abs(rec.eigenvalues), [0.135335, 0.367879], atol=1e-4)


def test_residuals_and_margins():
    for name in BASE_MODELS:
        for r in find_periodic_points(get_model(name)):
            assert r.residual <= 1e-8
            assert r.margin >= 1e-3


def test_non_hyperbolic_point_is_rejected():
    # the reflection fixes (1, 0) with eigenvalues 1 and -1
    with pytest.raises(NonHyperbolic):
        classify(get_model("theta"), np.array([1.0, 0.0]), 1)


def test_grid_must_be_fine_enough():
    with pytest.raises(ValueError):
        find_periodic_points(get_model("F1_torus"), grid_n=16)


def test_sign_change_cells():
    disp = np.zeros((4, 4, 2)) + 1.0
    disp[1, 1] = -1.0
    cells = {tuple(c) for c in _sign_change_cells(disp, False, False)}
    assert cells == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_saddle_frame_is_counter_clockwise():
    m = get_model("F1_torus")
    frame, lam_u, lam_s = saddle_frame(m, np.array([0.5, 0.0]), 1)
    u, s = frame["u+"], frame["s+"]
    assert u[0] * s[1] - u[1] * s[0] > 0
    assert abs(lam_u) > 1 > abs(lam_s)


@pytest.mark.parametrize("name", BASE_MODELS)
def test_extracted_matches_golden(analyzed, name):
    d = analyzed(name).descriptor
    assert validate(d) == []
    assert is_isomorphic(d, golden(name))


def test_xi0_smale_edge(analyzed):
    an = analyzed("xi0")
    d = an.descriptor
    assert len(d.smale_order) == 1
    (upper, lower), = d.smale_order
    het = [e for e in d.ends.values() if e.heteroclinic is not None]
    assert sorted(e.branch for e in het) == ["s-", "u-"]
    # the upper saddle is the one whose unstable separatrix is heteroclinic
    up = next(e for e in het if e.unstable)
    assert d.orbit_of[up.saddle] == upper


def test_crossings_of_the_heteroclinic_pair(analyzed):
    an = analyzed("xi0")
    free = [k for k, t in an.traced.items() if t.node is None]
    (iu, bu), = [k for k in free if k[1][0] == "u"]
    (js, bs), = [k for k in free if k[1][0] == "s"]
    n = len(crossings(an.model.surface, an.traced[iu, bu].curve, an.traced[js, bs].curve))
    assert n >= 3


def test_crossings_of_straight_segments():
    from mslab.surfaces import TORUS

    a = np.array([[0.1, 0.5], [0.45, 0.5], [0.9, 0.5]])
    b = np.array([[0.5, 0.1], [0.5, 0.45], [0.5, 0.55], [0.5, 0.9]])
    assert len(crossings(TORUS, a, b, h_max=0.5)) == 1


ORACLE = {  # frozen flood-fill counts: (components, cycle type)
    ("psi0", ()): (2, (1, 1)),
    ("F1_torus", ("sigma0",)): (2, (1, 1)),
    ("xi0", ("sigma1",)): (3, (1, 1, 1)),
}


@pytest.mark.parametrize("name,sigma", list(ORACLE))
def test_oracle_frozen(analyzed, name, sigma):
    res = charspace_oracle(analyzed(name), set(sigma), grid_n=64)
    assert (res.count, res.cycle_type) == ORACLE[name, sigma]


def test_oracle_matches_engine_on_psi1(analyzed):
    an = analyzed("psi1")
    for sig in enumerate_valid_sigma(an.descriptor):
        res = charspace_oracle(an, sig.orbits, grid_n=64)
        s = summarize(an.descriptor, sig.orbits)
        assert (res.count, res.cycle_type) == (s.set_count, s.cycle_type())
