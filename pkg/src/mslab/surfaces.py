"""Concrete surface charts: plane, circle, sphere, torus and projective plane.

Points are plain numpy arrays.  Every surface knows how to normalize a
point, how to lift a point next to a reference point (undoing the torus
lattice or the antipodal identification), and how to build an oriented
local chart around a point.  All charts of one surface are mutually
orientation-compatible, so ``sign(det J)`` of a map written in these
charts is a genuine local orientation character.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChartSingularity

NORTH = np.array([0.0, 0.0, 1.0])
SOUTH = np.array([0.0, 0.0, -1.0])


# ---------------------------------------------------------------------------
# coordinate helpers
# ---------------------------------------------------------------------------

def to_polar(p):
    """Cartesian ``(..., 2)`` -> ``(r, phi)`` with ``phi`` in ``[0, 2*pi)``."""
    p = np.asarray(p, dtype=float)
    r = np.hypot(p[..., 0], p[..., 1])
    phi = np.mod(np.arctan2(p[..., 1], p[..., 0]), 2 * np.pi)
    return r, phi


def from_polar(r, phi):
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)


def stereo_north(x):
    """Stereographic projection from ``N = (0, 0, 1)``."""
    x = np.asarray(x, dtype=float)
    d = 1.0 - x[..., 2]
    return np.stack([x[..., 0] / d, x[..., 1] / d], axis=-1)


def stereo_north_inv(z):
    z = np.asarray(z, dtype=float)
    s = z[..., 0] ** 2 + z[..., 1] ** 2
    return np.stack([2 * z[..., 0], 2 * z[..., 1], s - 1.0], axis=-1) / (s + 1.0)[..., None]


def stereo_south(x):
    """Projection from ``S``, conjugated so it is orientation-compatible with
    :func:`stereo_north` (the transition map is ``z -> 1/z``)."""
    x = np.asarray(x, dtype=float)
    d = 1.0 + x[..., 2]
    return np.stack([x[..., 0] / d, -x[..., 1] / d], axis=-1)


def stereo_south_inv(w):
    w = np.asarray(w, dtype=float)
    s = w[..., 0] ** 2 + w[..., 1] ** 2
    return np.stack([2 * w[..., 0], -2 * w[..., 1], 1.0 - s], axis=-1) / (s + 1.0)[..., None]


def canonical_projective(x):
    """Canonical sphere representative of a point of RP^2.

    The representative has ``x3 > 0``, or ``x3 = 0`` and ``x2 > 0``, or is
    ``(1, 0, 0)``.
    """
    x = np.array(x, dtype=float)
    flat = x.reshape(-1, 3)
    flip = (flat[:, 2] < 0) | ((flat[:, 2] == 0) & (flat[:, 1] < 0)) | (
        (flat[:, 2] == 0) & (flat[:, 1] == 0) & (flat[:, 0] < 0)
    )
    flat[flip] *= -1
    return flat.reshape(x.shape)


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    forward: object
    inverse: object


class Surface:
    kind = "abstract"
    dim = 2
    ambient_dim = 2
    euler_characteristic: int | None = None
    orientable = True

    def normalize(self, p):
        return np.asarray(p, dtype=float)

    def lift_near(self, p, ref):
        return np.asarray(p, dtype=float)

    def chart(self, ref):
        ident = Chart(lambda p: np.asarray(p, dtype=float), lambda z: np.asarray(z, dtype=float))
        return ident

    def distance(self, p, q):
        p = self.normalize(p)
        q = self.lift_near(self.normalize(q), p)
        return np.linalg.norm(np.asarray(p) - np.asarray(q), axis=-1)

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        return p.shape[-1] == self.ambient_dim

    def __repr__(self):
        return f"<{type(self).__name__}>"


class Plane(Surface):
    kind = "plane"


class Circle(Surface):
    """``R/Z`` with coordinate in ``[0, 1)``."""

    kind = "circle"
    dim = 1
    ambient_dim = 1
    euler_characteristic = 0

    def normalize(self, p):
        return np.mod(np.asarray(p, dtype=float), 1.0)

    def lift_near(self, p, ref):
        p = np.asarray(p, dtype=float)
        return p - np.round(p - np.asarray(ref, dtype=float))

    def chart(self, ref):
        ref = np.asarray(ref, dtype=float)
        return Chart(lambda p: self.lift_near(p, ref), self.normalize)


class Torus(Circle):
    """``R^2 / Z^2`` with coordinates in ``[0, 1)^2``."""

    kind = "torus"
    dim = 2
    ambient_dim = 2


class Sphere(Surface):
    kind = "sphere"
    ambient_dim = 3
    euler_characteristic = 2

    def normalize(self, p):
        p = np.asarray(p, dtype=float)
        return p / np.linalg.norm(p, axis=-1, keepdims=True)

    def contains(self, p):
        p = np.asarray(p, dtype=float)
        return p.shape[-1] == 3 and bool(np.all(np.abs(np.sum(p * p, axis=-1) - 1.0) <= 1e-10))

    def chart(self, ref):
        ref = np.asarray(ref, dtype=float)
        # chart-distance >= 0.1 from the projection pole
        if ref[2] <= 0.5:
            return Chart(stereo_north, stereo_north_inv)
        if ref[2] >= -0.5:
            return Chart(stereo_south, stereo_south_inv)
        raise ChartSingularity(f"no admissible chart at {ref}")  # pragma: no cover


class ProjectivePlane(Sphere):
    """RP^2 represented by canonical sphere representatives."""

    kind = "rp2"
    euler_characteristic = 1
    orientable = False

    def normalize(self, p):
        return canonical_projective(Sphere.normalize(self, p))

    def lift_near(self, p, ref):
        p = np.asarray(p, dtype=float)
        ref = np.asarray(ref, dtype=float)
        s = np.sign(np.sum(p * ref, axis=-1, keepdims=True))
        s[s == 0] = 1.0
        return p * s

    def chart(self, ref):
        base = Sphere.chart(self, ref)
        return Chart(lambda p: base.forward(self.lift_near(p, ref)), lambda z: self.normalize(base.inverse(z)))


PLANE = Plane()
CIRCLE = Circle()
TORUS = Torus()
SPHERE = Sphere()
RP2 = ProjectivePlane()

SURFACES = {s.kind: s for s in (PLANE, CIRCLE, TORUS, SPHERE, RP2)}
