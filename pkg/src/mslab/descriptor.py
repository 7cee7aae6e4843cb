"""Combinatorial descriptors of Morse-Smale surface diffeomorphisms.

An :class:`MSDescriptor` records the periodic orbits, every separatrix of
every saddle point (with its attachment to a node or its heteroclinic
target), the cyclic order of separatrix ends at each node, and the action
of ``f`` on points and separatrices.  Local orientations are implicit: each
point has one, rotations are written with respect to it, ``f`` carries the
sign ``eps`` comparing the local orientation at ``p`` with the one at
``f(p)``, and each node-attached separatrix has a twist sign.

Saddle points have the fixed cyclic order ``(u+, s+, u-, s-)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import gcd

from .errors import InconsistentEmbedding
from .ribbon import RibbonGraph, cycle_orbits, same_cycle

SINK, SADDLE, SOURCE = "sink", "saddle", "source"
KINDS = (SINK, SADDLE, SOURCE)
SADDLE_ORDER = ("u+", "s+", "u-", "s-")


@dataclass(frozen=True)
class OrbitRecord:
    id: str
    kind: str
    period: int
    orientation_type: tuple
    points: tuple = ()

    @property
    def positive(self):
        return all(x > 0 for x in self.orientation_type)


@dataclass(frozen=True)
class SeparatrixEnd:
    """One separatrix of a saddle point.

    ``node`` is the node point the separatrix ends at (sink for unstable,
    source for stable branches); otherwise ``heteroclinic`` names
    ``(saddle point, branch)`` of the invariant manifold it crosses.
    """

    id: str
    saddle: str
    branch: str
    node: str | None = None
    heteroclinic: tuple | None = None
    twist: int = 1

    @property
    def unstable(self):
        return self.branch[0] == "u"


@dataclass(frozen=True)
class MSDescriptor:
    name: str
    orbits: tuple
    ends: dict
    rotation: dict
    f_points: dict
    f_ends: dict
    meta: dict = field(default_factory=dict, compare=False)

    # ----------------------------------------------------------------- lookup
    @property
    def orbit_of(self):
        return {p: o.id for o in self.orbits for p in o.points}

    @property
    def orbit_by_id(self):
        return {o.id: o for o in self.orbits}

    def kind(self, point):
        return self.orbit_by_id[self.orbit_of[point]].kind

    def points(self, kind=None):
        return [p for o in self.orbits if kind is None or o.kind == kind for p in o.points]

    def saddle_orbits(self):
        return [o for o in self.orbits if o.kind == SADDLE]

    def branches(self, saddle):
        """``{branch: end id}`` for a saddle point."""
        return {e.branch: e.id for e in self.ends.values() if e.saddle == saddle}

    def eps(self, point):
        return self.f_points[point][1]

    @property
    def smale_order(self):
        """Pairs ``(upper, lower)`` of saddle orbit ids with ``W^u`` of the upper
        crossing ``W^s`` of the lower."""
        orb = self.orbit_of
        rel = set()
        for e in self.ends.values():
            if e.heteroclinic is None:
                continue
            a, b = orb[e.saddle], orb[e.heteroclinic[0]]
            rel.add((a, b) if e.unstable else (b, a))
        return frozenset(rel)

    @property
    def gradient_like(self):
        return not self.smale_order

    def counts(self):
        """Number of sink, saddle and source *points*."""
        return tuple(len(self.points(k)) for k in KINDS)

    def euler_characteristic(self):
        n0, n1, n2 = self.counts()
        return n0 - n1 + n2

    def summary(self):
        return [
            (o.id, o.kind, o.period, tuple(o.orientation_type)) for o in self.orbits
        ]

    # ----------------------------------------------------- ribbon structures
    def full_rotation(self, point):
        """Cyclic order of all separatrix ends at a point (saddle or node)."""
        if self.kind(point) == SADDLE:
            br = self.branches(point)
            return tuple(br[b] for b in SADDLE_ORDER)
        return tuple(self.rotation.get(point, ()))

    def ribbon(self, points=None, ends=None):
        """Ribbon graph on ``points`` using the node-attached ``ends``.

        Darts are ``(end id, "S")`` at the saddle and ``(end id, "N")`` at the
        node; rotations are restricted from :meth:`full_rotation`.
        """
        if points is None:
            points = self.points()
        if ends is None:
            ends = [e.id for e in self.ends.values() if e.node is not None]
        ends = set(ends)
        pts = set(points)
        rotation, partner, twist = {}, {}, {}
        for p in points:
            tag = "S" if self.kind(p) == SADDLE else "N"
            rotation[p] = [(e, tag) for e in self.full_rotation(p) if e in ends]
        for eid in ends:
            e = self.ends[eid]
            if e.node is None or e.saddle not in pts or e.node not in pts:
                raise InconsistentEmbedding(f"end {eid} is not an edge of the requested subgraph")
            a, b = (eid, "S"), (eid, "N")
            partner[a], partner[b] = b, a
            twist[a] = twist[b] = e.twist
        return RibbonGraph(rotation, partner, twist)

    def flag_map(self, flag):
        """Action of ``f`` on a flag ``((end, tag), side)``."""
        (eid, tag), s = flag
        e = self.ends[eid]
        v = e.saddle if tag == "S" else e.node
        return (self.f_ends[eid], tag), s * self.eps(v)

    def point_map(self, point, k=1):
        eps = 1
        for _ in range(k):
            point, e = self.f_points[point]
            eps *= e
        return point, eps


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def orientation_type_from_action(d, orbit):
    """Orientation type implied by the f-action on the first point of ``orbit``."""
    p = orbit.points[0]
    q, eps = d.point_map(p, orbit.period)
    if orbit.kind != SADDLE:
        return (eps,)
    br = d.branches(p)
    e = br["s+"]
    u = br["u+"]
    for _ in range(orbit.period):
        e, u = d.f_ends[e], d.f_ends[u]
    nu = 1 if d.ends[e].branch == "s+" else -1
    lam = 1 if d.ends[u].branch == "u+" else -1
    return (nu, lam)


def validate(d):
    """Return a list of violation messages (empty when ``d`` is consistent)."""
    v = []
    orb = d.orbit_of
    pts = set(orb)
    for o in d.orbits:
        if o.kind not in KINDS:
            v.append(f"orbit {o.id}: unknown kind {o.kind!r}")
            continue
        if o.period < 1 or o.period != len(o.points):
            v.append(f"orbit {o.id}: period {o.period} does not match its {len(o.points)} points")
        want = 2 if o.kind == SADDLE else 1
        if len(o.orientation_type) != want or any(x not in (1, -1) for x in o.orientation_type):
            v.append(f"orbit {o.id}: orientation type {o.orientation_type} has wrong shape")
        for i, p in enumerate(o.points):
            if p not in d.f_points:
                v.append(f"point {p}: missing from f-action")
                continue
            img = d.f_points[p][0]
            if img != o.points[(i + 1) % len(o.points)]:
                v.append(f"orbit {o.id}: f-action period mismatch at {p}")
        if all(p in d.f_points for p in o.points) and len(o.orientation_type) == want \
                and o.period == len(o.points):
            try:
                got = orientation_type_from_action(d, o)
            except KeyError:
                got = None
            if got is not None and tuple(got) != tuple(o.orientation_type):
                v.append(f"orbit {o.id}: orientation type {o.orientation_type} but f-action gives {got}")
    if set(d.f_points) != pts:
        v.append("f-action on points does not match the orbit points")
    for p, (q, e) in d.f_points.items():
        if q not in pts or e not in (1, -1):
            v.append(f"point {p}: bad f-image {q!r}/{e!r}")

    # separatrices
    for p in d.points(SADDLE):
        br = [e.branch for e in d.ends.values() if e.saddle == p]
        if sorted(br) != sorted(SADDLE_ORDER):
            v.append(f"saddle {p}: separatrix branches {sorted(br)}")
    for e in d.ends.values():
        if e.saddle not in pts or d.kind(e.saddle) != SADDLE:
            v.append(f"end {e.id}: owner {e.saddle!r} is not a saddle point")
            continue
        if (e.node is None) == (e.heteroclinic is None):
            v.append(f"end {e.id}: needs exactly one of node attachment / heteroclinic target")
        if e.node is not None:
            if e.node not in pts:
                v.append(f"end {e.id}: unknown node {e.node!r}")
            elif e.unstable and d.kind(e.node) != SINK:
                v.append(f"end {e.id}: unstable branch must end at sink")
            elif not e.unstable and d.kind(e.node) != SOURCE:
                v.append(f"end {e.id}: stable branch must start at source")
        if e.heteroclinic is not None:
            tgt, b = e.heteroclinic
            if tgt not in pts or d.kind(tgt) != SADDLE:
                v.append(f"end {e.id}: heteroclinic target {tgt!r} is not a saddle")
            elif b[0] == e.branch[0]:
                v.append(f"end {e.id}: heteroclinic target branch {b} has the same type")
        if e.twist not in (1, -1):
            v.append(f"end {e.id}: twist {e.twist}")
        if e.id not in d.f_ends:
            v.append(f"end {e.id}: missing from f-action")
    if v:
        return v

    # rotation system
    attached = {}
    for e in d.ends.values():
        if e.node is not None:
            attached.setdefault(e.node, []).append(e.id)
    for p in d.points():
        if d.kind(p) == SADDLE:
            continue
        rot = list(d.rotation.get(p, ()))
        if sorted(rot) != sorted(attached.get(p, [])):
            v.append(f"node {p}: rotation {rot} does not list exactly its attached ends")
    for p in d.rotation:
        if p not in pts or d.kind(p) == SADDLE:
            v.append(f"rotation given for non-node {p!r}")

    # f-action commutes with attachment and preserves rotations
    if sorted(d.f_ends.values()) != sorted(d.f_ends):
        v.append("f-action on separatrices is not a permutation")
    for eid, fid in d.f_ends.items():
        e, fe = d.ends[eid], d.ends.get(fid)
        if fe is None:
            v.append(f"end {eid}: f-image {fid!r} unknown")
            continue
        if d.f_points[e.saddle][0] != fe.saddle or e.branch[0] != fe.branch[0]:
            v.append(f"end {eid}: f-action does not commute with the saddle map")
        if e.node is not None:
            if fe.node != d.f_points[e.node][0]:
                v.append(f"end {eid}: f-action does not commute with attachment")
            elif fe.twist != d.eps(e.saddle) * e.twist * d.eps(e.node):
                v.append(f"end {eid}: twist not preserved by f")
        if e.heteroclinic is not None:
            if fe.heteroclinic is None or fe.heteroclinic[0] != d.f_points[e.heteroclinic[0]][0]:
                v.append(f"end {eid}: f-action does not commute with heteroclinic target")
    for p in d.points():
        q, eps = d.f_points[p]
        img = [d.f_ends[e] for e in d.full_rotation(p)]
        if eps < 0:
            img = img[::-1]
        if not same_cycle(img, d.full_rotation(q)):
            v.append(f"point {p}: f does not carry its cyclic order to {q} (eps={eps})")

    # Smale order must be a strict partial order
    rel = d.smale_order
    if any(a == b for a, b in rel):
        v.append("Smale order is not irreflexive")
    elif _has_cycle(rel):
        v.append("Smale order has a cycle")
    return v


def _has_cycle(rel):
    succ = {}
    for a, b in rel:
        succ.setdefault(a, set()).add(b)
    state = {}

    def visit(x):
        state[x] = 1
        for y in succ.get(x, ()):
            if state.get(y) == 1 or (y not in state and visit(y)):
                return True
        state[x] = 2
        return False

    return any(x not in state and visit(x) for x in list(succ))


def is_valid(d):
    return not validate(d)


# ---------------------------------------------------------------------------
# local orientation changes and powers
# ---------------------------------------------------------------------------

def reorient(d, point):
    """Flip the chosen local orientation at ``point`` (same diffeomorphism)."""
    rotation = dict(d.rotation)
    ends = dict(d.ends)
    f_points = dict(d.f_points)
    if point in rotation:
        rotation[point] = tuple(reversed(rotation[point]))
    for eid, e in d.ends.items():
        if e.saddle == point or e.node == point:
            ends[eid] = replace(e, twist=-e.twist)
    if d.kind(point) == SADDLE:
        # keep the (u+, s+, u-, s-) convention by renaming s+ <-> s-
        for eid, e in list(ends.items()):
            if e.saddle == point and not e.unstable:
                ends[eid] = replace(e, branch="s-" if e.branch == "s+" else "s+")
        for eid, e in list(ends.items()):
            if e.heteroclinic is not None and e.heteroclinic[0] == point and e.heteroclinic[1][0] == "s":
                b = e.heteroclinic[1]
                ends[eid] = replace(e, heteroclinic=(point, "s-" if b == "s+" else "s+"))
    q, eps = f_points[point]
    f_points[point] = (q, -eps)
    for p, (img, e) in d.f_points.items():
        if img == point:
            f_points[p] = (img, -f_points[p][1])
    return replace(d, ends=ends, rotation=rotation, f_points=f_points)


def power(d, k):
    """Descriptor of ``f**k``: same points and separatrices, orbits split."""
    if k < 1:
        raise ValueError("power must be positive")
    if k == 1:
        return d
    f_points = {p: d.point_map(p, k) for p in d.f_points}
    f_ends = {}
    for e in d.f_ends:
        x = e
        for _ in range(k):
            x = d.f_ends[x]
        f_ends[e] = x
    orbits = []
    for o in d.orbits:
        m = o.period // gcd(o.period, k)
        parts = o.period // m
        for j in range(parts):
            pts = []
            p = o.points[j]
            for _ in range(m):
                pts.append(p)
                p = f_points[p][0]
            oid = o.id if parts == 1 else f"{o.id}.{j}"
            orbits.append(OrbitRecord(oid, o.kind, m, (), tuple(pts)))
    out = replace(d, name=f"{d.name}^{k}", orbits=tuple(orbits), f_points=f_points, f_ends=f_ends)
    fixed = tuple(replace(o, orientation_type=orientation_type_from_action(out, o)) for o in orbits)
    return replace(out, orbits=fixed)


# ---------------------------------------------------------------------------
# surface identification
# ---------------------------------------------------------------------------

def surface_of(d):
    """``(orientable, genus)`` of the underlying closed surface.

    Genus is the number of handles (orientable) or cross-caps.
    """
    chi = d.euler_characteristic()
    attached = [e for e in d.ends.values() if e.node is not None]
    # orientability by twist switching over node attachments
    sign = {}
    adj = {}
    for e in attached:
        adj.setdefault(e.saddle, []).append((e.node, e.twist))
        adj.setdefault(e.node, []).append((e.saddle, e.twist))
    orientable = True
    for root in d.points():
        if root in sign:
            continue
        sign[root] = 1
        stack = [root]
        while stack:
            x = stack.pop()
            for y, t in adj.get(x, ()):
                want = sign[x] * t
                if y not in sign:
                    sign[y] = want
                    stack.append(y)
                elif sign[y] != want:
                    orientable = False
    if d.gradient_like and d.points(SADDLE):
        g = d.ribbon()
        if any(not darts for darts in g.rotation.values()):
            raise InconsistentEmbedding("a node carries no separatrix although saddles exist")
        faces = len(g.walks())
        if len(d.points()) - len(attached) + faces != chi:
            raise InconsistentEmbedding(
                f"face tracing gives chi={len(d.points()) - len(attached) + faces}, counts give {chi}"
            )
    if orientable:
        if chi % 2:
            raise InconsistentEmbedding(f"orientable surface with odd Euler characteristic {chi}")
        return True, (2 - chi) // 2
    return False, 2 - chi


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

def _flag_structure(d):
    darts = []
    for e in d.ends.values():
        darts.append((e.id, "S"))
        if e.node is not None:
            darts.append((e.id, "N"))
    rot = {}
    for p in d.points():
        tag = "S" if d.kind(p) == SADDLE else "N"
        rot[p] = [(e, tag) for e in d.full_rotation(p)]
    nxt, prv, vert = {}, {}, {}
    for p, ds in rot.items():
        for i, x in enumerate(ds):
            nxt[x] = ds[(i + 1) % len(ds)]
            prv[x] = ds[(i - 1) % len(ds)]
            vert[x] = p
    orb = d.orbit_by_id

    def label(x):
        (eid, tag), s = x
        e = d.ends[eid]
        p = vert[(eid, tag)]
        o = orb[d.orbit_of[p]]
        return (tag, e.branch[0], o.kind, o.period, e.heteroclinic is not None)

    def a0(x):
        (eid, tag), s = x
        e = d.ends[eid]
        if e.node is None:
            return x
        return ((eid, "N" if tag == "S" else "S"), -s * e.twist)

    def a1(x):
        dt, s = x
        return (nxt[dt], -1) if s > 0 else (prv[dt], 1)

    def a2(x):
        return (x[0], -x[1])

    def het(x):
        (eid, tag), s = x
        e = d.ends[eid]
        if e.heteroclinic is None or tag != "S":
            return None
        tgt = d.branches(e.heteroclinic[0])[e.heteroclinic[1]]
        return (tgt, "S")

    flags = [(x, s) for x in darts for s in (1, -1)]
    return flags, label, (a0, a1, a2), het


def is_isomorphic(d1, d2):
    """Isomorphism of descriptors: a bijection of flags commuting with the
    ribbon involutions, the f-action and heteroclinic targets, and preserving
    point kinds, periods and branch types."""
    inv = lambda d: sorted((o.kind, o.period, tuple(o.orientation_type)) for o in d.orbits)  # noqa: E731
    if inv(d1) != inv(d2) or len(d1.ends) != len(d2.ends):
        return False
    if sorted(e.heteroclinic is None for e in d1.ends.values()) != sorted(
            e.heteroclinic is None for e in d2.ends.values()):
        return False
    flags1, lab1, ops1, het1 = _flag_structure(d1)
    flags2, lab2, ops2, het2 = _flag_structure(d2)
    if len(flags1) != len(flags2):
        return False
    if not flags1:
        return True
    # connected pieces of the flag graph of d1
    comps = []
    seen = set()
    for x in flags1:
        if x in seen:
            continue
        comp, stack = [], [x]
        seen.add(x)
        while stack:
            y = stack.pop()
            comp.append(y)
            for op in ops1:
                z = op(y)
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        comps.append(comp)

    def extend(root, image, iso, used):
        new = {root: image}
        stack = [root]
        while stack:
            y = stack.pop()
            for op1, op2 in zip(ops1, ops2):
                z1, z2 = op1(y), op2(new[y])
                if z1 in new or z1 in iso:
                    if new.get(z1, iso.get(z1)) != z2:
                        return None
                    continue
                if z2 in used or lab1(z1) != lab2(z2):
                    return None
                if z2 in new.values():
                    return None
                new[z1] = z2
                stack.append(z1)
        return new

    def search(i, iso, used):
        if i == len(comps):
            return _check_action(d1, d2, iso, het1, het2)
        root = comps[i][0]
        for cand in flags2:
            if cand in used or lab1(root) != lab2(cand):
                continue
            new = extend(root, cand, iso, used)
            if new is None:
                continue
            iso2 = dict(iso)
            iso2.update(new)
            if search(i + 1, iso2, used | set(new.values())):
                return True
        return False

    return search(0, {}, frozenset())


def _check_action(d1, d2, iso, het1, het2):
    for x, y in iso.items():
        if iso.get(d1.flag_map(x)) != d2.flag_map(y):
            return False
        h1 = het1(x)
        if h1 is not None:
            h2 = het2(y)
            if h2 is None or iso.get((h1, 1))[0] != h2:
                return False
    return True


def orbit_cycles(d):
    """Cycles of ``f`` on points (debug helper)."""
    return cycle_orbits({p: q for p, (q, _) in d.f_points.items()})


def replace_name(d, name):
    return replace(d, name=name)
