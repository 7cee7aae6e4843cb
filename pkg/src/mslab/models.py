"""Evaluatable model diffeomorphisms on concrete surface charts.

Every model is a :class:`ModelMap` built by :func:`get_model`.  Plane pieces
act on Cartesian ``(x, y)``; sphere models are conjugated through the
stereographic chart from the north pole ``N``; the projective plane model is
the sphere model taken modulo the antipodal map; torus models act on
``[0, 1)^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import expit

from . import flows
from .errors import ChartMismatch, ChartSingularity, NonFinite
from .surfaces import (
    CIRCLE,
    PLANE,
    RP2,
    SPHERE,
    TORUS,
    Surface,
    canonical_projective,
    from_polar,
    stereo_north,
    stereo_north_inv,
    to_polar,
)

DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class ModelMap:
    """A self-map of a surface chart with optional inverse.

    ``forward`` and ``backward`` act on batches of shape ``(n, ambient_dim)``.
    """

    name: str
    surface: Surface
    evaluation: str
    forward: Callable = field(repr=False)
    backward: Callable | None = field(default=None, repr=False)
    description: str = ""
    step: float = DEFAULT_STEP

    def _batch(self, p):
        p = np.asarray(p, dtype=float)
        single = p.ndim == 1
        if p.shape[-1] != self.surface.ambient_dim:
            raise ChartMismatch(
                f"{self.name} acts on {self.surface.kind} points of dimension "
                f"{self.surface.ambient_dim}, got shape {p.shape}"
            )
        return np.atleast_2d(p), single

    def _apply(self, fn, p):
        batch, single = self._batch(p)
        out = fn(batch)
        if not np.all(np.isfinite(out)):
            raise NonFinite(f"{self.name} produced non-finite values")
        out = self.surface.normalize(out)
        return out[0] if single else out

    def __call__(self, p):
        return self._apply(self.forward, p)

    def inverse(self, p):
        if self.backward is None:
            raise NotImplementedError(f"{self.name} has no inverse")
        return self._apply(self.backward, p)

    def iterate(self, p, k):
        fn = self if k >= 0 else self.inverse
        for _ in range(abs(k)):
            p = fn(p)
        return p

    def jacobian(self, p, h=1e-6, period=1):
        """Central-difference Jacobian of ``f**period`` at ``p`` in oriented
        local charts at ``p`` and at its image."""
        if not 1e-8 <= h <= 1e-3:
            raise ValueError("finite-difference step must lie in [1e-8, 1e-3]")
        p = self.surface.normalize(np.asarray(p, dtype=float))
        if self.surface.dim != 2:
            src = self.surface.chart(p)
            q = self.iterate(p, period)
            dst = self.surface.chart(q)
            z = src.forward(p)
            zp = dst.forward(self.iterate(src.inverse(z + h), period))
            zm = dst.forward(self.iterate(src.inverse(z - h), period))
            return np.atleast_2d((zp - zm) / (2 * h))
        src = self.surface.chart(p)
        q = self.iterate(p, period)
        dst = self.surface.chart(q)
        z = src.forward(p)
        pts = np.array([z + [h, 0], z - [h, 0], z + [0, h], z - [0, h]])
        imgs = dst.forward(self.iterate(src.inverse(pts), period))
        jac = np.empty((2, 2))
        jac[:, 0] = (imgs[0] - imgs[1]) / (2 * h)
        jac[:, 1] = (imgs[2] - imgs[3]) / (2 * h)
        if not np.all(np.isfinite(jac)):
            raise ChartSingularity(f"{self.name}: no admissible chart at {p}")
        return jac


def compose(name, *maps, description=""):
    """``compose(name, a, b)`` evaluates ``a(b(p))``."""
    surface = maps[0].surface

    def fwd(p):
        for m in reversed(maps):
            p = m.forward(p)
        return p

    def bwd(p):
        for m in maps:
            p = m.backward(p)
        return p

    has_inv = all(m.backward is not None for m in maps)
    return ModelMap(name, surface, "composition", fwd, bwd if has_inv else None, description)


# ---------------------------------------------------------------------------
# plane pieces
# ---------------------------------------------------------------------------

def _chi(step, t):
    def fn(z):
        r, phi = to_polar(z)
        r2, phi2 = flows.chi_flow_polar(r, phi, t, step)
        return from_polar(r2, phi2)

    return fn


def theta(z):
    """Reflection ``(r, phi) -> (r, -phi)``."""
    return z * np.array([1.0, -1.0])


def h_map(z):
    return z / 2.0


def h_inv(z):
    return z * 2.0


def _phi_shifted(z):
    """Polar angle in ``(-pi/2, 3pi/2]``."""
    phi = np.arctan2(z[..., 1], z[..., 0])
    return np.where(phi <= -np.pi / 2, phi + 2 * np.pi, phi)


def eta_minus(z):
    z = np.atleast_2d(z)
    r = np.hypot(z[:, 0], z[:, 1])
    phi = _phi_shifted(z)
    return np.stack([3.0 - np.log2(r), 8.0 * (phi / np.pi - 1.0)], axis=-1)


def eta_minus_inv(c):
    c = np.atleast_2d(c)
    return from_polar(2.0 ** (3.0 - c[:, 0]), np.pi * (1.0 + c[:, 1] / 8.0))


def eta_plus(z):
    z = np.atleast_2d(z)
    r = np.hypot(z[:, 0], z[:, 1])
    phi = _phi_shifted(z)
    return np.stack([-3.0 - np.log2(r), 8.0 * phi / np.pi], axis=-1)


def eta_plus_inv(c):
    c = np.atleast_2d(c)
    return from_polar(2.0 ** (-3.0 - c[:, 0]), np.pi * c[:, 1] / 8.0)


def g_strip(c, t=1.0):
    return np.atleast_2d(c) + np.array([t, 0.0])


def sector_masks(z):
    """Closed sectors ``A_-`` (around ``phi = pi``) and ``A_+`` (around 0)."""
    z = np.atleast_2d(z)
    phi = _phi_shifted(z)
    nonzero = np.hypot(z[:, 0], z[:, 1]) > 0
    in_minus = nonzero & (phi >= 3 * np.pi / 4) & (phi <= 5 * np.pi / 4)
    in_plus = nonzero & (np.abs(phi) <= np.pi / 4)
    return in_minus, in_plus


def _f_bar(step, t):
    def fn(z):
        z = np.atleast_2d(np.asarray(z, dtype=float))
        out = z * (2.0 ** (-t))
        m, p = sector_masks(z)
        if m.any():
            out[m] = eta_minus_inv(flows.cherry_flow(eta_minus(z[m]), +1, t, step))
        if p.any():
            out[p] = eta_plus_inv(flows.cherry_flow(eta_plus(z[p]), -1, t, step))
        return out

    return fn


def nu(t):
    """Twist profile on ``[1, 2]``: 1 at ``t = 1``, 2 at ``t = 2``, flat at both ends."""
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 1.5, 2.0, 1.0).astype(float)
    inner = (t > 1.0) & (t < 2.0)
    ti = t[inner]
    with np.errstate(divide="ignore", over="ignore"):
        arg = (ti - 1.5) / ((ti - 1.0) ** 2 * (ti - 2.0) ** 2)
    out[inner] = 1.0 + expit(arg)
    return out


def _dehn(sign):
    def fn(z):
        z = np.atleast_2d(np.asarray(z, dtype=float)).copy()
        r = np.hypot(z[:, 0], z[:, 1])
        k = (r >= 1.0) & (r <= 2.0)
        if k.any():
            ang = sign * 2 * np.pi * nu(r[k])
            c, s = np.cos(ang), np.sin(ang)
            x, y = z[k, 0].copy(), z[k, 1].copy()
            z[k, 0] = c * x - s * y
            z[k, 1] = s * x + c * y
        return z

    return fn


# ---------------------------------------------------------------------------
# circle / torus pieces
# ---------------------------------------------------------------------------

def f_bar_circle(x):
    return x + np.sin(2 * np.pi * x) / (6 * np.pi)


def f_bar_circle_inv(y, tol=1e-15):
    y = np.asarray(y, dtype=float)
    x = y.copy()
    for _ in range(60):
        dx = (f_bar_circle(x) - y) / (1.0 + np.cos(2 * np.pi * x) / 3.0)
        x = x - dx
        if np.max(np.abs(dx), initial=0.0) < tol:
            break
    return x


def a_hat(p):
    """Coordinate swap ``(x, y) -> (y, x)`` on the torus."""
    return np.asarray(p)[..., ::-1].copy()


# ---------------------------------------------------------------------------
# sphere lifting
# ---------------------------------------------------------------------------

def _on_sphere(plane_fn):
    def fn(x):
        x = np.atleast_2d(x)
        out = np.empty_like(x)
        north = x[:, 2] >= 1.0 - 1e-15
        out[north] = [0.0, 0.0, 1.0]
        if (~north).any():
            out[~north] = stereo_north_inv(plane_fn(stereo_north(x[~north])))
        return out

    return fn


def _mod_antipode(sphere_fn):
    def fn(x):
        return canonical_projective(sphere_fn(x))

    return fn


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _build(name, step):
    chi_f, chi_b = _chi(step, 1.0), _chi(step, -1.0)
    psi0_bar_f = lambda z: theta(chi_f(z))  # noqa: E731
    psi0_bar_b = lambda z: chi_b(theta(z))  # noqa: E731
    fbar_f, fbar_b = _f_bar(step, 1.0), _f_bar(step, -1.0)
    dehn_f, dehn_b = _dehn(+1), _dehn(-1)
    xi0_bar_f = lambda z: dehn_f(fbar_f(z))  # noqa: E731
    xi0_bar_b = lambda z: fbar_b(dehn_b(z))  # noqa: E731

    def circle_f(x):
        return np.mod(f_bar_circle(x), 1.0)

    def circle_b(x):
        return np.mod(f_bar_circle_inv(x), 1.0)

    table = {
        "chi": (PLANE, "flow", chi_f, chi_b, "time-1 map of the radial/angular field"),
        "theta": (PLANE, "closed-form", theta, theta, "reflection (r, phi) -> (r, -phi)"),
        "psi0_bar": (PLANE, "composition", psi0_bar_f, psi0_bar_b, "theta o chi on the plane"),
        "psi0": (SPHERE, "composition", _on_sphere(psi0_bar_f), _on_sphere(psi0_bar_b),
                 "orientation-changing gradient-like sphere map"),
        "psitilde1": (RP2, "composition", _mod_antipode(_on_sphere(psi0_bar_f)),
                      _mod_antipode(_on_sphere(psi0_bar_b)), "psi0 modulo the antipodal map"),
        "F_circle": (CIRCLE, "closed-form", circle_f, circle_b, "source-sink circle map"),
        "F1_torus": (TORUS, "closed-form", lambda p: np.mod(f_bar_circle(p), 1.0),
                     lambda p: np.mod(f_bar_circle_inv(p), 1.0), "product F x F"),
        "A_hat": (TORUS, "closed-form", a_hat, a_hat, "coordinate swap automorphism"),
        "psi1": (TORUS, "composition", lambda p: a_hat(np.mod(f_bar_circle(p), 1.0)),
                 lambda p: np.mod(f_bar_circle_inv(a_hat(p)), 1.0), "A_hat o F1"),
        "h_plane": (PLANE, "closed-form", h_map, h_inv, "radial contraction r -> r/2"),
        "north_south": (SPHERE, "closed-form", _on_sphere(h_map), _on_sphere(h_inv),
                        "north-south sphere map induced by h"),
        "g_strip": (PLANE, "closed-form", g_strip, lambda c: g_strip(c, -1.0), "translation on C"),
        "phi_minus": (PLANE, "flow", lambda c: flows.cherry_flow(c, +1, 1.0, step),
                      lambda c: flows.cherry_flow(c, +1, -1.0, step), "saddle-sink flow on C"),
        "phi_plus": (PLANE, "flow", lambda c: flows.cherry_flow(c, -1, 1.0, step),
                     lambda c: flows.cherry_flow(c, -1, -1.0, step), "saddle-source flow on C"),
        "f_bar": (PLANE, "composition", fbar_f, fbar_b, "h with cherry flows inside A_- and A_+"),
        "dehn_twist": (PLANE, "closed-form", dehn_f, dehn_b, "Dehn twist of 1 <= |z| <= 2"),
        "xi0_bar": (PLANE, "composition", xi0_bar_f, xi0_bar_b, "Dehn twist o f_bar"),
        "xi0": (SPHERE, "composition", _on_sphere(xi0_bar_f), _on_sphere(xi0_bar_b),
                "Morse-Smale sphere map with a heteroclinic pair"),
    }
    surf, kind, fwd, bwd, desc = table[name]
    return ModelMap(name, surf, kind, fwd, bwd, desc, step)


MODEL_NAMES = (
    "chi", "theta", "psi0_bar", "psi0", "psitilde1", "F_circle", "F1_torus", "A_hat",
    "psi1", "h_plane", "north_south", "g_strip", "phi_minus", "phi_plus", "f_bar",
    "dehn_twist", "xi0_bar", "xi0",
)
ALIASES = {"phi_minus_time1": "phi_minus", "phi_plus_time1": "phi_plus", "F1": "F1_torus"}

# closed surfaces realized numerically; these are the base models of the analysis
BASE_MODELS = ("psi0", "psitilde1", "F1_torus", "psi1", "xi0", "north_south")


def get_model(name, step=DEFAULT_STEP):
    name = ALIASES.get(name, name)
    if name not in MODEL_NAMES:
        raise KeyError(f"unknown model {name!r}")
    return _build(name, step)


def model_catalog():
    """List of ``{"name", "surface", "evaluation", "description"}`` entries."""
    out = []
    for name in MODEL_NAMES:
        m = _build(name, DEFAULT_STEP)
        out.append({
            "name": name,
            "surface": m.surface.kind,
            "evaluation": "flow-based" if _uses_flow(name) else "closed-form",
            "kind": m.evaluation,
            "description": m.description,
        })
    return out


_FLOW_MODELS = {"chi", "psi0_bar", "psi0", "psitilde1", "phi_minus", "phi_plus", "f_bar", "xi0_bar", "xi0"}


def _uses_flow(name):
    return name in _FLOW_MODELS


def conjugacy_residual(sample_count=1000, seed=0):
    """Largest residuals of the conjugacy identities over random samples:
    ``eta_-(h p) = g(eta_- p)`` on ``A_-``, ``eta_+(h p) = g(eta_+ p)`` on
    ``A_+`` and ``vartheta(psi0 q) = psi0_bar(vartheta q)`` on the sphere."""
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    r = np.exp(rng.uniform(np.log(0.01), np.log(100.0), sample_count))
    d = rng.uniform(-np.pi / 4, np.pi / 4, sample_count)
    out = {}
    for key, eta, phi in (("eta_minus", eta_minus, np.pi + d), ("eta_plus", eta_plus, d)):
        p = from_polar(r, phi)
        out[key] = float(np.max(np.linalg.norm(eta(h_map(p)) - g_strip(eta(p)), axis=-1)))
    # keep q and psi0(q) away from the projection pole so the plane values stay moderate
    q = rng.normal(size=(4 * sample_count + 16, 3))
    q /= np.linalg.norm(q, axis=-1, keepdims=True)
    q = q[q[:, 2] < 0.9][:sample_count]
    m = get_model("psi0")
    bar = get_model("psi0_bar")
    out["theta"] = float(np.max(np.linalg.norm(stereo_north(m(q)) - bar(stereo_north(q)), axis=-1)))
    return out
