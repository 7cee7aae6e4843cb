"""Numerical extraction of the combinatorial data of a model map.

Periodic points are found where the displacement changes sign on a seed grid,
then polished by a
root solve in a local chart; separatrices are traced as images of a
fundamental segment; the result is assembled into an :class:`MSDescriptor`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage, optimize
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .descriptor import SADDLE, SADDLE_ORDER, SINK, SOURCE, MSDescriptor, OrbitRecord, SeparatrixEnd
from .errors import NonHyperbolic, NoLimit, ResolutionTooCoarse

DEDUP_TOL = 1e-6
RESIDUAL_TOL = 1e-8
HYPERBOLIC_MARGIN = 1e-6


@dataclass(frozen=True)
class PeriodicPointRecord:
    point: np.ndarray = field(repr=False)
    period: int
    kind: str
    eigenvalues: tuple
    eps: int  # sign of det Df at the point (oriented charts)
    orientation_type: tuple
    residual: float = 0.0
    margin: float = 0.0  # distance of the eigenvalue moduli from 1

    @property
    def coords(self):
        return tuple(float(x) for x in self.point)


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------

def _latlon(n):
    """Cell centres of an ``n x 2n`` colatitude/longitude grid, shape ``(n, 2n, 3)``."""
    th = (np.arange(n) + 0.5) / n * np.pi
    ph = (np.arange(2 * n) + 0.5) / (2 * n) * 2 * np.pi
    st, ct = np.sin(th)[:, None], np.cos(th)[:, None]
    return np.stack(np.broadcast_arrays(st * np.cos(ph), st * np.sin(ph), ct), axis=-1)


PLANE_WINDOW = 2.5


def seed_grid(surface, n, window=PLANE_WINDOW):
    """Seed points, shape ``(rows, cols, ambient)``, and whether rows and
    columns wrap.  Plane models are seeded on ``[-window, window]^2``."""
    if surface.kind in ("sphere", "rp2"):
        return _latlon(n), False, True
    if surface.kind == "torus":
        c = (np.arange(n) + 0.5) / n
        return np.stack(np.meshgrid(c, c, indexing="ij"), axis=-1), True, True
    if surface.kind == "plane":
        c = np.linspace(-window, window, n)
        return np.stack(np.meshgrid(c, c, indexing="ij"), axis=-1), False, False
    raise ValueError(f"no seed grid for surface {surface.kind}")


def _tangent_displacement(surface, x, img):
    """Displacement ``img - x`` in a frame that is continuous over the grid."""
    if surface.kind == "torus":
        return (img - x + 0.5) % 1.0 - 0.5
    if surface.kind == "plane":
        return img - x
    d = surface.lift_near(img, x) - x
    e_ph = np.stack([-x[..., 1], x[..., 0], np.zeros(x.shape[:-1])], axis=-1)
    e_th = np.cross(e_ph, x)
    return np.stack([np.sum(d * e_th, axis=-1), np.sum(d * e_ph, axis=-1)], axis=-1)


def _sign_change_cells(disp, wrap_rows, wrap_cols):
    """Index pairs of grid squares on whose corners both displacement
    components change sign."""
    if wrap_rows:
        disp = np.concatenate([disp, disp[:1]], axis=0)
    if wrap_cols:
        disp = np.concatenate([disp, disp[:, :1]], axis=1)
    corners = np.stack([disp[:-1, :-1], disp[1:, :-1], disp[:-1, 1:], disp[1:, 1:]])
    hit = np.all(corners.max(axis=0) >= 0, axis=-1) & np.all(corners.min(axis=0) <= 0, axis=-1)
    return np.argwhere(hit)


def _cell_mean(surface, quad):
    ref = quad[0]
    if surface.kind == "torus":
        return ref + np.mean([(q - ref + 0.5) % 1.0 - 0.5 for q in quad], axis=0)
    return np.mean([surface.lift_near(q, ref) for q in quad], axis=0)


def _extra_seeds(surface):
    if surface.kind in ("sphere", "rp2"):
        return [np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])]
    return []


# ---------------------------------------------------------------------------
# periodic points
# ---------------------------------------------------------------------------

def _solve(model, seed, k):
    surf = model.surface
    chart = surf.chart(seed)
    z0 = chart.forward(seed)

    def g(z):
        img = model.iterate(chart.inverse(z), k)
        return chart.forward(img) - z

    try:
        sol = optimize.root(g, z0, method="hybr", options={"xtol": 1e-14})
    except Exception:  # map left its chart or produced non-finite values
        return None
    p = surf.normalize(chart.inverse(sol.x))
    res = float(surf.distance(model.iterate(p, k), p))
    if not np.isfinite(res) or res > RESIDUAL_TOL:
        return None
    return p, res


def _minimal_period(model, p, k):
    for j in range(1, k):
        if k % j == 0 and float(model.surface.distance(model.iterate(p, j), p)) < DEDUP_TOL:
            return j
    return k


def _locate(model, max_period, grid_n, window=PLANE_WINDOW):
    """Periodic points of period ``<= max_period``: ``[(point, period, residual)]``."""
    surf = model.surface
    grid, wrap_rows, wrap_cols = seed_grid(surf, grid_n, window)
    rows, cols = grid.shape[:2]
    flat = grid.reshape(-1, grid.shape[-1])
    found = []
    for k in range(1, max_period + 1):
        disp = _tangent_displacement(surf, flat, model.iterate(flat, k)).reshape(rows, cols, 2)
        cand = _extra_seeds(surf)
        for i, j in _sign_change_cells(disp, wrap_rows, wrap_cols):
            quad = [grid[(i + a) % rows, (j + b) % cols] for a in (0, 1) for b in (0, 1)]
            cand.append(surf.normalize(_cell_mean(surf, quad)))
        for seed in cand:
            out = _solve(model, seed, k)
            if out is None:
                continue
            p, r = out
            if any(float(surf.distance(p, q)) < DEDUP_TOL for q, _, _ in found):
                continue
            if _minimal_period(model, p, k) != k:
                continue
            found.append((p, k, r))
    return found


def classify(model, p, period):
    """Hyperbolic type of the periodic point ``p``."""
    p = model.surface.normalize(np.asarray(p, dtype=float))
    jk = model.jacobian(p, period=period)
    ev = np.linalg.eigvals(jk)
    mods = np.abs(ev)
    margin = float(np.min(np.abs(mods - 1.0)))
    if margin <= HYPERBOLIC_MARGIN:
        raise NonHyperbolic(f"eigenvalue of modulus {mods} at {p} (period {period})")
    eps = int(np.sign(np.linalg.det(model.jacobian(p))))
    if np.all(mods < 1):
        kind, otype = SINK, (int(np.sign(np.linalg.det(jk))),)
    elif np.all(mods > 1):
        kind, otype = SOURCE, (int(np.sign(np.linalg.det(jk))),)
    else:
        ev = ev.real
        s, u = (ev[0], ev[1]) if abs(ev[0]) < 1 else (ev[1], ev[0])
        kind, otype = SADDLE, (int(np.sign(s)), int(np.sign(u)))
    ev = tuple(complex(x) if abs(np.imag(x)) > 0 else float(np.real(x)) for x in ev[np.argsort(mods)])
    res = float(model.surface.distance(model.iterate(p, period), p))
    return PeriodicPointRecord(p, period, kind, ev, eps, otype, res, margin)


def find_periodic_points(model, max_period=2, grid_n=48, window=PLANE_WINDOW):
    """Classified periodic points of period ``<= max_period``."""
    if max_period < 1 or grid_n < 32:
        raise ValueError("need max_period >= 1 and grid_n >= 32")
    return [classify(model, p, k) for p, k, _ in _locate(model, max_period, grid_n, window)]


# ---------------------------------------------------------------------------
# orbits and saddle frames
# ---------------------------------------------------------------------------

def group_orbits(model, recs, tol=1e-5):
    """Index lists of ``recs``, each in the order ``p, f(p), f^2(p), ...``."""
    surf = model.surface
    seen, orbits = set(), []
    for i, r in enumerate(recs):
        if i in seen:
            continue
        orb, p = [i], r.point
        for _ in range(r.period - 1):
            p = model(p)
            j = min(range(len(recs)), key=lambda m: float(surf.distance(recs[m].point, p)))
            if float(surf.distance(recs[j].point, p)) > tol:
                raise NoLimit(f"orbit of {r.coords} does not close up")
            orb.append(j)
        seen.update(orb)
        orbits.append(orb)
    return orbits


def _unit(v):
    v = np.real(np.asarray(v, dtype=float))
    return v / np.linalg.norm(v)


def saddle_frame(model, p, period):
    """Branch directions ``{branch: unit vector}`` in the chart at ``p``.

    ``u+`` is the unstable direction with non-negative first component
    (second, if the first vanishes); ``s+`` is the stable direction
    counter-clockwise after it, so the order is ``u+, s+, u-, s-``."""
    ev, vec = np.linalg.eig(model.jacobian(p, period=period))
    iu = int(np.argmax(np.abs(ev)))
    vu, vs = _unit(vec[:, iu]), _unit(vec[:, 1 - iu])
    if vu[0] < -1e-12 or (abs(vu[0]) <= 1e-12 and vu[1] < 0):
        vu = -vu
    if vu[0] * vs[1] - vu[1] * vs[0] < 0:
        vs = -vs
    lam_u, lam_s = float(np.real(ev[iu])), float(np.real(ev[1 - iu]))
    return {"u+": vu, "s+": vs, "u-": -vu, "s-": -vs}, lam_u, lam_s


def branch_action(model, p, frame_p, frame_q):
    """``{branch at p: branch at f(p)}`` from the one-step Jacobian."""
    jac = model.jacobian(p)
    out = {}
    for b, v in frame_p.items():
        w = _unit(jac @ v)
        out[b] = max(frame_q, key=lambda c: float(np.dot(frame_q[c], w)))
    return out


# ---------------------------------------------------------------------------
# separatrix tracing
# ---------------------------------------------------------------------------

@dataclass
class TracedBranch:
    saddle: int  # index into the periodic point records
    branch: str
    curve: np.ndarray = field(repr=False)  # consecutive points at most ``h_max`` apart
    node: int | None = None  # captured node record, if any
    domains: int = 0
    first_crossing: int | None = None  # heteroclinic branches: first crossing index


def _midpoint(surface, a, b):
    if surface.kind == "torus":
        return (a + ((b - a + 0.5) % 1.0 - 0.5) / 2) % 1.0
    if surface.kind in ("sphere", "rp2"):
        return surface.normalize(a + surface.lift_near(b, a))
    return (a + b) / 2  # pragma: no cover


def _refine(surface, step, prev, cur, h_max, max_points):
    """Insert midpoints of ``prev`` (and their images) until consecutive
    points of ``cur`` are at most ``h_max`` apart."""
    for _ in range(40):
        gap = surface.distance(cur[:-1], cur[1:])
        bad = np.flatnonzero(gap > h_max)
        if bad.size == 0 or len(cur) + bad.size > max_points:
            break
        mids = np.array([_midpoint(surface, prev[i], prev[i + 1]) for i in bad])
        imgs = step(mids)
        prev = np.insert(prev, bad + 1, mids, axis=0)
        cur = np.insert(cur, bad + 1, imgs, axis=0)
    return cur


def trace_branch(model, recs, i, branch, frame, lam, targets, delta=1e-4, h_max=0.01,
                 capture=1e-4, max_domains=60, max_points=6000, escape=None):
    """Trace one separatrix of saddle record ``i`` as successive images of a
    fundamental domain (forward for unstable, backward for stable branches)
    until every point of three consecutive domains lies within ``capture``
    of one node in ``targets``.  On the plane, tracing also stops once the
    whole domain lies outside the disk of radius ``escape``."""
    surf, rec = model.surface, recs[i]
    m = rec.period * (1 if lam > 0 else 2)
    if branch[0] == "u":
        step = lambda x: model.iterate(x, m)  # noqa: E731
        mult = abs(lam) ** (m // rec.period)
    else:
        step = lambda x: model.iterate(x, -m)  # noqa: E731
        mult = abs(lam) ** (-(m // rec.period))
    chart = surf.chart(rec.point)
    z0 = chart.forward(rec.point)
    s = np.linspace(0.0, 1.0, 9)[:, None]
    dom = surf.normalize(chart.inverse(z0 + delta * (1 + (mult - 1) * s) * frame[branch]))
    dom = _refine(surf, lambda x: x, dom, dom, h_max, max_points)
    pieces, near, node = [dom], 0, None
    for j in range(max_domains):
        nxt = _refine(surf, step, dom, step(dom), h_max, max_points)
        pieces.append(nxt[1:])
        dom = nxt
        hit = None
        for t in targets:
            if float(np.max(surf.distance(dom, recs[t].point))) < capture:
                hit = t
        near = near + 1 if hit is not None and hit == node else (1 if hit is not None else 0)
        node = hit
        if near >= 3 or len(dom) >= max_points:
            break
        if escape is not None and float(np.min(np.linalg.norm(dom, axis=-1))) > escape:
            break
    curve = np.concatenate(pieces)
    return TracedBranch(i, branch, curve, node if near >= 3 else None, j + 1)


def trace_all(model, recs):
    """Frames and traced separatrices of every saddle record."""
    sinks = [k for k, r in enumerate(recs) if r.kind == SINK]
    sources = [k for k, r in enumerate(recs) if r.kind == SOURCE]
    frames, traced = {}, {}
    for i, r in enumerate(recs):
        if r.kind != SADDLE:
            continue
        frame, lam_u, lam_s = saddle_frame(model, r.point, r.period)
        frames[i] = frame
        for b in SADDLE_ORDER:
            unstable = b[0] == "u"
            traced[i, b] = trace_branch(model, recs, i, b, frame, lam_u if unstable else lam_s,
                                        sinks if unstable else sources)
    return frames, traced


def _local_coords(surface, ref, pts):
    """2-d coordinates of ``pts`` in a frame at ``ref`` (one row per pair)."""
    if surface.kind == "torus":
        return (pts - ref + 0.5) % 1.0 - 0.5
    pts = surface.lift_near(pts, ref)
    e1 = np.cross(ref, np.where(np.abs(ref[:, :1]) < 0.9, [[1.0, 0, 0]], [[0, 1.0, 0]]))
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(ref, e1)
    return np.stack([np.sum(pts * e1, axis=-1), np.sum(pts * e2, axis=-1)], axis=-1)


def crossings(surface, a, b, h_max=0.01):
    """Segment indices of ``a`` at which it crosses ``b`` transversally."""
    if len(a) < 2 or len(b) < 2:
        return np.zeros(0, dtype=int)
    box = 1.0 if surface.kind == "torus" else None
    ma, mb = _midpoint(surface, a[:-1], a[1:]), _midpoint(surface, b[:-1], b[1:])
    ta, tb = cKDTree(ma, boxsize=box), cKDTree(mb, boxsize=box)
    # RP^2 points come as canonical lifts; search the antipodes as well
    pairs = ta.sparse_distance_matrix(tb, 1.5 * h_max, output_type="ndarray")
    ia, ib = pairs["i"], pairs["j"]
    if surface.kind == "rp2":
        neg = cKDTree(-mb).sparse_distance_matrix(ta, 1.5 * h_max, output_type="ndarray")
        ia, ib = np.concatenate([ia, neg["j"]]), np.concatenate([ib, neg["i"]])
    if ia.size == 0:
        return np.zeros(0, dtype=int)
    ref = a[ia]
    p0, p1 = _local_coords(surface, ref, a[ia]), _local_coords(surface, ref, a[ia + 1])
    q0, q1 = _local_coords(surface, ref, b[ib]), _local_coords(surface, ref, b[ib + 1])

    def orient(u, v, w):
        return np.sign((v[:, 0] - u[:, 0]) * (w[:, 1] - u[:, 1]) - (v[:, 1] - u[:, 1]) * (w[:, 0] - u[:, 0]))

    hit = (orient(p0, p1, q0) * orient(p0, p1, q1) < 0) & (orient(q0, q1, p0) * orient(q0, q1, p1) < 0)
    return np.unique(ia[hit])


# ---------------------------------------------------------------------------
# descriptor extraction
# ---------------------------------------------------------------------------

_PREFIX = {SINK: ("w", "omega"), SOURCE: ("a", "alpha"), SADDLE: ("s", "sigma")}
HET_MIN_CROSSINGS = 3


def _lifted_end(surface, start, curve, node, rho):
    """Continuously lifted first point of ``curve`` within ``rho`` of ``node``
    and the twist (+1 when the lift arrives at the node's own lift)."""
    lift = np.asarray(start, dtype=float)
    for q in curve:
        lift = surface.lift_near(q, lift)
        if float(surface.distance(q, node)) < rho:
            break
    else:
        raise NoLimit("separatrix never enters the node's neighbourhood")
    if surface.kind != "rp2":
        return lift, 1
    return lift, 1 if float(np.dot(lift, node)) > 0 else -1


def _het_partner(surface, traced, key):
    """The branch of another saddle crossed at least ``HET_MIN_CROSSINGS``
    times by the uncaptured separatrix ``key``."""
    i, b = key
    best, hits = None, np.zeros(0, dtype=int)
    for (j, c), other in traced.items():
        if j == i or other.node is not None or c[0] == b[0]:
            continue
        h = crossings(surface, traced[key].curve, other.curve)
        if len(h) > len(hits):
            best, hits = (j, c), h
    if len(hits) < HET_MIN_CROSSINGS:
        raise NoLimit(f"separatrix {b} of saddle {i} neither reaches a node nor crosses another separatrix")
    traced[key].first_crossing = int(hits[0])
    return best


@dataclass
class Analysis:
    """Everything computed on the way to a descriptor."""

    model: object
    descriptor: MSDescriptor
    records: list
    names: dict  # record index -> point name
    traced: dict  # (record index, branch) -> TracedBranch

    def index(self, name):
        return {v: k for k, v in self.names.items()}[name]


def extract_descriptor(model, max_period=2, grid_n=48):
    """Numerically computed descriptor of ``model``.

    ``meta`` records coordinates, eigenvalues, residuals and hyperbolicity
    margins of the periodic points under their descriptor names."""
    return analyze(model, max_period, grid_n).descriptor


def analyze(model, max_period=2, grid_n=48, rho=0.02):
    surf = model.surface
    recs = find_periodic_points(model, max_period, grid_n)
    orbits = group_orbits(model, recs)
    counters, names, orbit_recs = {}, {}, []
    for orb in sorted(orbits, key=lambda o: (("sink", "saddle", "source").index(recs[o[0]].kind), o[0])):
        kind = recs[orb[0]].kind
        pp, op = _PREFIX[kind]
        n = counters.get(kind, 0)
        counters[kind] = n + 1
        pts = []
        for j, i in enumerate(orb):
            names[i] = f"{pp}{n}" if len(orb) == 1 else f"{pp}{n}_{j}"
            pts.append(names[i])
        orbit_recs.append(OrbitRecord(f"{op}{n}", kind, len(orb), tuple(recs[orb[0]].orientation_type), tuple(pts)))
    f_points = {}
    for orb in orbits:
        for j, i in enumerate(orb):
            f_points[names[i]] = (names[orb[(j + 1) % len(orb)]], recs[i].eps)
    frames, traced = trace_all(model, recs)
    ends, fans = {}, {}
    for (i, b), tb in traced.items():
        eid = f"{names[i]}:{b}"
        if tb.node is None:
            j, c = _het_partner(surf, traced, (i, b))
            ends[eid] = SeparatrixEnd(eid, names[i], b, None, (names[j], c), 1)
            continue
        node = recs[tb.node].point
        lift, twist = _lifted_end(surf, recs[i].point, tb.curve, node, rho)
        chart = surf.chart(node)
        z = chart.forward(lift) - chart.forward(node)
        fans.setdefault(tb.node, []).append((math.atan2(z[1], z[0]), eid))
        ends[eid] = SeparatrixEnd(eid, names[i], b, names[tb.node], None, twist)
    rotation = {names[k]: tuple(e for _, e in sorted(v)) for k, v in fans.items()}
    f_ends = {}
    for orb in orbits:
        if recs[orb[0]].kind != SADDLE:
            continue
        for j, i in enumerate(orb):
            nxt = orb[(j + 1) % len(orb)]
            act = branch_action(model, recs[i].point, frames[i], frames[nxt])
            for b in SADDLE_ORDER:
                f_ends[f"{names[i]}:{b}"] = f"{names[nxt]}:{act[b]}"
    meta = {"points": {names[i]: {"coords": r.coords, "period": r.period, "kind": r.kind,
                                  "eigenvalues": r.eigenvalues, "residual": r.residual, "margin": r.margin}
                       for i, r in enumerate(recs)}}
    d = MSDescriptor(model.name, tuple(orbit_recs), ends, rotation, f_points, f_ends, meta)
    return Analysis(model, d, recs, names, traced)


# ---------------------------------------------------------------------------
# flood-fill oracle for the characteristic space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    count: int
    cycle_type: tuple  # sorted lengths of the f-cycles on components
    grid_n: int


def _raster(surface, n):
    """Cell centres, shape ``(rows, cols, ambient)``, spacing and row wrap."""
    if surface.kind in ("sphere", "rp2"):
        return _latlon(n), np.pi / n, False
    c = (np.arange(n) + 0.5) / n
    return np.stack(np.meshgrid(c, c, indexing="ij"), axis=-1), 1.0 / n, True


def _cell_of(surface, pts, n):
    """Row and column of the cell containing each point."""
    if surface.kind == "torus":
        ij = np.floor(np.mod(pts, 1.0) * n).astype(int) % n
        return ij[:, 0], ij[:, 1]
    th = np.arccos(np.clip(pts[:, 2], -1.0, 1.0))
    ph = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
    return np.minimum((th / np.pi * n).astype(int), n - 1), (ph / (2 * np.pi) * 2 * n).astype(int) % (2 * n)


def _blocked(surface, cells, spacing, curves):
    rows, cols = cells.shape[:2]
    flat = cells.reshape(-1, cells.shape[-1])
    box = 1.0 if surface.kind == "torus" else None
    tree = cKDTree(np.mod(flat, 1.0) if box else flat, boxsize=box)
    blocked = np.zeros(len(flat), dtype=bool)
    radius = max(2 * spacing, 0.0101)  # never thinner than the curve sampling
    for c in curves:
        pts = np.mod(c, 1.0) if box else c
        if surface.kind == "rp2":
            pts = np.concatenate([pts, -pts])
        for hit in tree.query_ball_point(pts, radius):
            blocked[hit] = True
    return blocked.reshape(rows, cols)


def _components(free, wrap_rows, antipodal):
    """Labels of the free cells, with seams (and antipodes on RP^2) glued."""
    lab, n = ndimage.label(free)
    rows, cols = free.shape
    pairs = [(lab[:, 0], lab[:, -1])]
    if wrap_rows:
        pairs.append((lab[0, :], lab[-1, :]))
    if antipodal:
        pairs.append((lab, np.roll(lab[::-1, :], cols // 2, axis=1)))
    a = np.concatenate([p.ravel() for p, _ in pairs])
    b = np.concatenate([q.ravel() for _, q in pairs])
    keep = (a > 0) & (b > 0)
    g = csr_matrix((np.ones(keep.sum()), (a[keep], b[keep])), shape=(n + 1, n + 1))
    _, comp = connected_components(g, directed=False)
    out = np.where(lab > 0, comp[lab], -1)
    return out


def _oracle_once(an, sigma, n, min_fraction):
    surf, d = an.model.surface, an.descriptor
    in_sigma = {an.index(p) for o in d.orbits if o.id in sigma for p in o.points}
    # a heteroclinic separatrix is drawn up to its first crossing: beyond it
    # it only accumulates on invariant curves drawn anyway and closes off nothing
    curves = [tb.curve if tb.first_crossing is None else tb.curve[:tb.first_crossing + 2]
              for (i, b), tb in an.traced.items() if (b[0] == "u") == (i in in_sigma)]
    cells, spacing, wrap_rows = _raster(surf, n)
    free = ~_blocked(surf, cells, spacing, curves)
    comp = _components(free, wrap_rows, surf.kind == "rp2")
    ids, sizes = np.unique(comp[comp >= 0], return_counts=True)
    big = ids[sizes >= min_fraction * comp.size]
    index = {c: k for k, c in enumerate(big)}
    rng = np.random.default_rng(0)
    perm = []
    for c in big:
        where = np.argwhere(comp == c)
        pick = where[rng.choice(len(where), size=min(64, len(where)), replace=False)]
        r, k = _cell_of(surf, an.model(cells[pick[:, 0], pick[:, 1]]), n)
        hits = [index[x] for x in comp[r, k] if x in index]
        if not hits:
            raise ResolutionTooCoarse(f"component images fall outside the resolved components at grid {n}")
        perm.append(max(set(hits), key=hits.count))
    if sorted(perm) != list(range(len(big))):
        raise ResolutionTooCoarse(f"f does not permute the components at grid {n}")
    seen, cycles = set(), []
    for k in range(len(perm)):
        if k in seen:
            continue
        length, j = 0, k
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        cycles.append(length)
    return OracleResult(len(big), tuple(sorted(cycles)), n)


def charspace_oracle(an, sigma, grid_n=96, min_fraction=1e-3):
    """Components of ``M`` minus the closures of ``W^u`` of the saddles in
    ``sigma`` and ``W^s`` of the others, by flood fill on a grid, together
    with the cycle type of ``f`` on them.  Counted at ``grid_n`` and
    ``2 grid_n``; the two must agree."""
    a = _oracle_once(an, set(sigma), grid_n, min_fraction)
    b = _oracle_once(an, set(sigma), 2 * grid_n, min_fraction)
    if (a.count, a.cycle_type) != (b.count, b.cycle_type):
        raise ResolutionTooCoarse(f"grid {grid_n}: {a.count} {a.cycle_type}, grid {2 * grid_n}: {b.count} {b.cycle_type}")
    return a
