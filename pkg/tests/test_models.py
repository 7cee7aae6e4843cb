import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mslab import flows
from mslab.errors import ChartMismatch
from mslab.models import (
    BASE_MODELS, MODEL_NAMES, a_hat, compose, conjugacy_residual, eta_minus, eta_plus,
    f_bar_circle, get_model, model_catalog, nu, sector_masks,
)
from mslab.surfaces import NORTH, stereo_north_inv


def sphere(x, y):
    return stereo_north_inv(np.array([x, y]))


def test_catalog_lists_every_model():
    names = [m["name"] for m in model_catalog()]
    assert tuple(names) == MODEL_NAMES
    assert set(BASE_MODELS) <= set(names)


def test_unknown_model():
    with pytest.raises(KeyError, match="unknown model"):
        get_model("nosuchmodel")


def test_aliases():
    assert get_model("F1").name == "F1_torus"
    assert get_model("phi_minus_time1").name == "phi_minus"


def test_psi0_fixes_north():
    assert np.allclose(get_model("psi0")(NORTH), NORTH)


def test_psi1_swaps_the_saddles():
    assert np.allclose(get_model("psi1")(np.array([0.0, 0.5])), [0.5, 0.0])


@pytest.mark.parametrize("p", [(1.0, 0.0), (-1.0, 0.0)])
def test_phi_minus_fixed_points(p):
    assert np.allclose(get_model("phi_minus")(np.array(p)), p, atol=1e-12)


def test_dehn_twist_is_identity_on_the_inner_circle():
    m = get_model("dehn_twist")
    phi = np.linspace(0, 2 * np.pi, 17)
    z = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    assert np.allclose(m(z), z, atol=1e-12)


def test_nu_profile():
    assert nu(np.array([1.0, 2.0])).tolist() == [1.0, 2.0]
    t = np.linspace(1, 2, 201)
    assert np.all(np.diff(nu(t)) >= 0)


def test_eta_values():
    assert np.allclose(eta_minus(np.array([-2.0, 0.0])), [[2.0, 0.0]])
    assert np.allclose(eta_plus(np.array([0.5, 0.0])), [[-2.0, 0.0]])


def test_jacobian_F1_at_sink():
    jac = get_model("F1_torus").jacobian(np.array([0.5, 0.5]))
    assert np.allclose(jac, np.diag([2 / 3, 2 / 3]), atol=1e-6)


def test_jacobian_chi_source():
    ev = np.linalg.eigvals(get_model("chi").jacobian(np.array([0.0, 0.0])))
    assert np.all(np.abs(ev) > 1)


def test_jacobian_identity_composition():
    theta = get_model("theta")
    ident = compose("theta2", theta, theta)
    assert np.allclose(ident.jacobian(np.array([0.3, -0.7])), np.eye(2), atol=1e-6)


def test_jacobian_step_bounds():
    with pytest.raises(ValueError):
        get_model("chi").jacobian(np.zeros(2), h=1e-2)


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        get_model("psi0")(np.array([0.1, 0.2]))


def test_varrho_symmetry():
    r = np.exp(np.linspace(np.log(0.01), np.log(100), 401))
    assert max(abs(flows.varrho(x) - flows.varrho(1 / x)) for x in r) <= 1e-12


def test_f_bar_circle_monotone_and_periodic():
    x = np.linspace(0, 1, 1001)
    y = f_bar_circle(x)
    assert np.all(np.diff(y) > 0)
    assert np.allclose(f_bar_circle(x + 1), y + 1)


def test_a_hat_involution():
    rng = np.random.default_rng(1)
    t = rng.random((100, 2))
    assert np.array_equal(a_hat(a_hat(t)), t)


def test_psitilde1_well_defined():
    rng = np.random.default_rng(2)
    q = rng.normal(size=(1000, 3))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    m = get_model("psitilde1")
    assert np.allclose(m(q), m(-q), atol=1e-12)


def test_phi_flows_agree_with_translation_far_out():
    # the whole time-1 trajectory must stay in |x| >= 2
    rng = np.random.default_rng(3)
    x = np.where(rng.random(200) < 0.5, rng.uniform(2, 6, 200), rng.uniform(-6, -3, 200))
    c = np.stack([x, rng.uniform(-4, 4, 200)], axis=-1)
    for name in ("phi_minus", "phi_plus"):
        assert np.max(np.abs(get_model(name)(c) - (c + [1.0, 0.0]))) <= 1e-9


@pytest.mark.parametrize("name,sign", [("psi0", -1), ("psi0_bar", -1), ("psi1", -1), ("F1_torus", 1), ("xi0", 1)])
def test_orientation_character(name, sign):
    m = get_model(name)
    rng = np.random.default_rng(4)
    if m.surface.kind == "sphere":
        pts = [sphere(*xy) for xy in rng.uniform(-2, 2, (12, 2))]
    elif m.surface.kind == "torus":
        pts = list(rng.random((12, 2)))
    else:
        pts = list(rng.uniform(-2, 2, (12, 2)))
    dets = [np.linalg.det(m.jacobian(p)) for p in pts]
    assert all(np.sign(d) == sign for d in dets)


def test_sector_boundaries_agree():
    # on the edges of A_- and A_+ the cherry flows coincide with h
    m = get_model("f_bar")
    r = np.linspace(0.1, 5, 9)
    for phi in (np.pi / 4, -np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4):
        z = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
        assert sector_masks(z)[0].any() or sector_masks(z)[1].any()
        assert np.allclose(m(z), z / 2, atol=1e-6)


def test_conjugacy_residuals():
    res = conjugacy_residual(1000)
    assert set(res) == {"eta_minus", "eta_plus", "theta"}
    assert max(res.values()) <= 1e-6


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_chi_inverse_roundtrip(x, y):
    m = get_model("chi")
    p = np.array([x, y])
    assert np.allclose(m.inverse(m(p)), p, atol=1e-8)
