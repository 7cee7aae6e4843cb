"""Vector fields and their fixed-step RK4 time-t maps.

The kernels are compiled with numba and act on batches of points.  A flow
is integrated with ``n = round(|t| / step)`` classical Runge-Kutta steps.
"""
from __future__ import annotations

import math

import numba
import numpy as np

from .errors import NonFinite


@numba.njit(cache=True)
def varrho(r):
    """Bump profile with ``varrho(r) == varrho(1/r)``: ``sech(ln r) = 2r/(1+r^2)``."""
    if r <= 0.0:
        return 0.0
    if r > 1.0:
        s = 1.0 / r
        return 2.0 * s / (1.0 + s * s)
    return 2.0 * r / (1.0 + r * r)


@numba.njit(cache=True)
def _chi_field(r, phi):
    if r <= 1.0:
        dr = -r * (r - 1.0)
    else:
        dr = 1.0 - r
    # sign chosen so the sinks sit on the x-axis; see README "Model notes"
    dphi = -varrho(r) * math.sin(2.0 * phi)
    return dr, dphi


@numba.njit(cache=True)
def _chi_batch(r0, phi0, t, step):
    n = r0.shape[0]
    nsteps = max(1, int(round(abs(t) / step)))
    h = t / nsteps
    r_out = np.empty(n)
    p_out = np.empty(n)
    for i in range(n):
        r = r0[i]
        p = phi0[i]
        if r == 0.0:
            r_out[i] = 0.0
            p_out[i] = p
            continue
        for _ in range(nsteps):
            k1r, k1p = _chi_field(r, p)
            k2r, k2p = _chi_field(r + 0.5 * h * k1r, p + 0.5 * h * k1p)
            k3r, k3p = _chi_field(r + 0.5 * h * k2r, p + 0.5 * h * k2p)
            k4r, k4p = _chi_field(r + h * k3r, p + h * k3p)
            r += h * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
            p += h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        r_out[i] = r
        p_out[i] = p
    return r_out, p_out


@numba.njit(cache=True)
def _cherry_field(x, d, sgn):
    rho2 = x * x + d * d
    if rho2 <= 4.0:
        q = rho2 - 4.0
        dx = 1.0 - q * q / 9.0
    else:
        dx = 1.0
    if rho2 <= 2.0:
        dd = -sgn * d
    elif rho2 <= 4.0:
        dd = sgn * 0.5 * d * (math.sin(0.5 * math.pi * (rho2 - 3.0)) - 1.0)
    else:
        dd = 0.0
    return dx, dd


@numba.njit(cache=True)
def _cherry_batch(x0, d0, sgn, t, step):
    n = x0.shape[0]
    nsteps = max(1, int(round(abs(t) / step)))
    h = t / nsteps
    xo = np.empty(n)
    do = np.empty(n)
    for i in range(n):
        x = x0[i]
        d = d0[i]
        # far from the disk the flow is the translation (x + t, d)
        if abs(x) > 2.0 + abs(t) + 1.0 or abs(d) > 2.0:
            xo[i] = x + t
            do[i] = d
            continue
        for _ in range(nsteps):
            a1, b1 = _cherry_field(x, d, sgn)
            a2, b2 = _cherry_field(x + 0.5 * h * a1, d + 0.5 * h * b1, sgn)
            a3, b3 = _cherry_field(x + 0.5 * h * a2, d + 0.5 * h * b2, sgn)
            a4, b4 = _cherry_field(x + h * a3, d + h * b3, sgn)
            x += h * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0
            d += h * (b1 + 2.0 * b2 + 2.0 * b3 + b4) / 6.0
        xo[i] = x
        do[i] = d
    return xo, do


def _check(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NonFinite("integration produced non-finite values")


def chi_flow_polar(r, phi, t=1.0, step=1e-3):
    """Time-``t`` map of the radial/angular field, in polar coordinates."""
    r = np.ascontiguousarray(np.atleast_1d(r), dtype=float)
    phi = np.ascontiguousarray(np.atleast_1d(phi), dtype=float)
    ro, po = _chi_batch(r, phi, float(t), float(step))
    _check(ro, po)
    return ro, po


def cherry_flow(xd, sign, t=1.0, step=1e-3):
    """Time-``t`` map of ``phi_-`` (``sign=+1``) or ``phi_+`` (``sign=-1``) on
    the strip ``C = R x [-2, 2]``; ``xd`` has shape ``(n, 2)``."""
    xd = np.atleast_2d(np.asarray(xd, dtype=float))
    x = np.ascontiguousarray(xd[:, 0])
    d = np.ascontiguousarray(xd[:, 1])
    xo, do = _cherry_batch(x, d, float(sign), float(t), float(step))
    _check(xo, do)
    return np.stack([xo, do], axis=-1)


def calibrate_step(flow, probe, step=1e-3, tol=1e-9, min_step=1e-5):
    """Halve ``step`` until the time-1 displacement of ``probe`` changes by
    less than ``tol``.  ``flow(probe, step)`` returns the image array."""
    prev = flow(probe, step)
    while step > min_step:
        cur = flow(probe, step / 2)
        if np.max(np.abs(cur - prev)) < tol:
            return step
        step /= 2
        prev = cur
    return step
