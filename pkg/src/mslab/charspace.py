"""Characteristic spaces of orbits, decided combinatorially.

For an f-invariant set of saddle orbits ``sigma`` the attractor picture is
the ribbon graph on the sinks and the saddle points of ``sigma`` whose edges
are their unstable separatrices; the repeller picture is built from the
sources, the remaining saddles and their stable separatrices.  Boundary
walks of either picture are the components of the characteristic space and
the action of ``f`` on flags gives the orbit space.

A separatrix crossing the stable manifold of a lower saddle ``t`` (branch
``b``) is drawn as an edge ending at ``t`` in the slot of ``b``: it winds
onto the unstable manifold of ``t`` from that side.  Separatrices entering
the same slot are ordered by id.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .descriptor import SADDLE, SADDLE_ORDER, SINK, SOURCE
from .errors import CaseViolation, InconsistentEmbedding, NotGradientLikeSigma
from .ribbon import RibbonGraph, walk_index

TORUS, KLEIN = "torus", "klein_bottle"
SHORT = {TORUS: "T", KLEIN: "K"}


@dataclass(frozen=True)
class ComponentClass:
    """One component of the orbit space with the number ``multiplicity`` of
    characteristic-space components covering it."""

    surface_type: str
    multiplicity: int
    anchors: frozenset = field(default=frozenset(), compare=False, repr=False)


@dataclass(frozen=True)
class CharSpaceSummary:
    sigma: frozenset
    components: tuple
    method: str = "attractor"

    @property
    def count(self):
        return len(self.components)

    @property
    def connected(self):
        return len(self.components) == 1

    @property
    def set_count(self):
        """Components of the characteristic set in the surface itself."""
        return sum(c.multiplicity for c in self.components)

    def signature(self):
        """Sorted ``(surface type, multiplicity)`` pairs; compares summaries."""
        return tuple(sorted((c.surface_type, c.multiplicity) for c in self.components))

    def cycle_type(self):
        return tuple(sorted(c.multiplicity for c in self.components))

    def describe(self):
        parts = [f"{SHORT[t]}x{m}" if m > 1 else SHORT[t] for t, m in self.signature()]
        return " + ".join(parts) if parts else "(empty)"


@dataclass(frozen=True)
class SaddleSurgeryData:
    orbit: str
    orientation_type: tuple
    u_circles: int
    s_circles: int
    u_classes: tuple  # index into the current components, per unstable circle
    s_classes: tuple  # index into s_components, per stable circle
    s_components: tuple = ()
    s_end_classes: tuple = ()  # (end id, index into s_components)
    orientable: bool = True


@dataclass(frozen=True)
class SigmaSet:
    orbits: frozenset

    def __iter__(self):
        return iter(sorted(self.orbits))

    def label(self):
        return "{" + ", ".join(sorted(self.orbits)) + "}"


def sigma_points(d, sigma):
    by_id = d.orbit_by_id
    return {p for o in sigma for p in by_id[o].points}


# ---------------------------------------------------------------------------
# valid sets
# ---------------------------------------------------------------------------

def is_valid_sigma(d, sigma):
    sigma = set(sigma)
    ids = {o.id for o in d.saddle_orbits()}
    if not sigma <= ids:
        return False
    return all(lo in sigma for hi, lo in d.smale_order if hi in sigma)


def enumerate_valid_sigma(d):
    """All downward-closed sets of saddle orbits, smallest first."""
    ids = sorted(o.id for o in d.saddle_orbits())
    out = []
    for k in range(len(ids) + 1):
        for combo in combinations(ids, k):
            if is_valid_sigma(d, combo):
                out.append(SigmaSet(frozenset(combo)))
    return out


def linear_extension(d, sigma):
    """Orbits of ``sigma`` ordered so lower saddles come first."""
    sigma = set(sigma)
    below = {s: {lo for hi, lo in d.smale_order if hi == s and lo in sigma} for s in sigma}
    out, done = [], set()
    while len(out) < len(sigma):
        ready = sorted(s for s in sigma - done if below[s] <= done)
        if not ready:
            raise InconsistentEmbedding("Smale order has a cycle")
        out.append(ready[0])
        done.add(ready[0])
    return out


# ---------------------------------------------------------------------------
# pictures
# ---------------------------------------------------------------------------

@dataclass
class Picture:
    """A ribbon picture with its walks and the f-action on them."""

    d: object
    side: str  # "attractor" or "repeller"
    saddles: set
    graph: RibbonGraph
    walks: list
    where: dict
    iso: dict

    def vertex(self, dart):
        eid, tag = dart
        e = self.d.ends[eid]
        if tag == "S":
            return e.saddle
        if tag == "N":
            return e.node
        return e.heteroclinic[0]

    def f_flag(self, flag):
        (eid, tag), s = flag
        return (self.d.f_ends[eid], tag), s * self.d.eps(self.vertex((eid, tag)))

    def walk_of_flag(self, flag):
        return self.where[flag][0]

    def key(self, i):
        w = self.walks[i]
        return ("vertex", w.vertex) if w.isolated else frozenset(w.flags)

    def image(self, i):
        """Index of the f-image of walk ``i``."""
        w = self.walks[i]
        if w.isolated:
            return self.iso[self.d.f_points[w.vertex][0]]
        return self.where[self.f_flag(w.flags[0])][0]

    def preserves(self, i, m):
        """Whether ``f**m`` (mapping walk ``i`` to itself) keeps its direction."""
        w = self.walks[i]
        if w.isolated:
            return self.d.point_map(w.vertex, m)[1] > 0
        x = w.flags[0]
        for _ in range(m):
            x = self.f_flag(x)
        j, pos = self.where[x]
        if j != i:
            raise InconsistentEmbedding("f-orbit of a boundary walk does not close up")
        return pos % 2 == 0


def picture(d, sigma, side):
    """Attractor (``side="attractor"``) or repeller picture of ``sigma``."""
    inside = sigma_points(d, sigma)
    attractor = side == "attractor"
    node_kind = SINK if attractor else SOURCE
    saddles = {p for p in d.points(SADDLE) if (p in inside) == attractor}
    ends = [e for e in d.ends.values() if e.saddle in saddles and e.unstable == attractor]
    endset = {e.id for e in ends}
    slots = {}
    for e in ends:
        if e.heteroclinic is not None:
            if e.heteroclinic[0] not in saddles:
                raise NotGradientLikeSigma(
                    f"{e.id} crosses the invariant manifold of {e.heteroclinic[0]}, which is not in the picture")
            slots.setdefault(e.heteroclinic, []).append(e.id)
    rotation, partner, twist = {}, {}, {}
    for p in d.points(node_kind):
        rotation[p] = [(x, "N") for x in d.rotation.get(p, ()) if x in endset]
    for p in sorted(saddles):
        br = d.branches(p)
        rot = []
        for b in SADDLE_ORDER:
            if (b[0] == "u") == attractor:
                rot.append((br[b], "S"))
            else:
                rot.extend((x, "H") for x in sorted(slots.get((p, b), ())))
        rotation[p] = rot
    for e in ends:
        a = (e.id, "S")
        b = (e.id, "N") if e.node is not None else (e.id, "H")
        partner[a], partner[b] = b, a
        twist[a] = twist[b] = e.twist
    g = RibbonGraph(rotation, partner, twist)
    walks = g.walks()
    where, iso = walk_index(walks)
    return Picture(d, side, saddles, g, walks, where, iso)


def walk_classes(pic):
    """f-orbits of walks: ``(list of orbits as index lists, walk -> class id)``."""
    seen, orbits, cls = set(), [], {}
    for i in range(len(pic.walks)):
        if i in seen:
            continue
        orb = [i]
        seen.add(i)
        j = pic.image(i)
        while j != i:
            if j in seen:
                raise InconsistentEmbedding("f does not act as a permutation on boundary walks")
            orb.append(j)
            seen.add(j)
            j = pic.image(j)
        for j in orb:
            cls[j] = len(orbits)
        orbits.append(orb)
    return orbits, cls


def summary_from_picture(d, sigma, pic):
    orbits, _ = walk_classes(pic)
    comps = []
    for orb in orbits:
        m = len(orb)
        kind = TORUS if pic.preserves(orb[0], m) else KLEIN
        comps.append(ComponentClass(kind, m, frozenset(pic.key(i) for i in orb)))
    return CharSpaceSummary(frozenset(sigma), tuple(comps), pic.side)


def _has_heteroclinic_edges(pic):
    return any(tag == "H" for darts in pic.graph.rotation.values() for _, tag in darts)


def charspace_of_sigma(d, sigma, side="attractor"):
    """Tier 1: components from the boundary walks of one picture.

    Raises :class:`NotGradientLikeSigma` when the picture would need a
    separatrix crossing another saddle's invariant manifold.
    """
    sigma = frozenset(getattr(sigma, "orbits", sigma))
    if not is_valid_sigma(d, sigma):
        raise NotGradientLikeSigma(f"{sorted(sigma)} is not downward closed in the Smale order")
    pic = picture(d, sigma, side)
    if _has_heteroclinic_edges(pic):
        raise NotGradientLikeSigma(f"the {side} picture of {sorted(sigma)} contains heteroclinic separatrices")
    return summary_from_picture(d, sigma, pic)


def tier1(d, sigma):
    """Tier 1 on whichever side admits it, or ``None``."""
    for side in ("attractor", "repeller"):
        try:
            return charspace_of_sigma(d, sigma, side)
        except NotGradientLikeSigma:
            continue
    return None


# ---------------------------------------------------------------------------
# locating separatrices of a saddle outside the picture
# ---------------------------------------------------------------------------

def _slot_predecessor(pic, target, branch, eid):
    """Dart preceding ``eid`` if it were drawn into the slot ``branch`` at ``target``."""
    d = pic.d
    br = d.branches(target)
    attractor = pic.side == "attractor"
    rot = []
    for b in SADDLE_ORDER:
        if (b[0] == "u") == attractor:
            rot.append((br[b], "S"))
        else:
            existing = [x for x, tag in pic.graph.rotation[target] if tag == "H"
                        and d.ends[x].heteroclinic == (target, b)]
            if b == branch:
                existing = sorted(existing + [eid])
            rot.extend((x, "H") for x in existing)
    i = rot.index((eid, "H"))
    return rot[i - 1]


def locate(pic, eid):
    """Walk index of the component containing separatrix ``eid`` (whose saddle
    is not in the picture but whose far end is)."""
    d = pic.d
    e = d.ends[eid]
    if e.node is not None:
        full = d.full_rotation(e.node)
        darts = {x for x, _ in pic.graph.rotation.get(e.node, ())}
        if not darts:
            return pic.iso[e.node]
        i = full.index(eid)
        for k in range(1, len(full) + 1):
            a = full[(i - k) % len(full)]
            if a in darts:
                return pic.walk_of_flag(((a, "N"), 1))
        raise InconsistentEmbedding(f"no picture dart found at {e.node}")
    target, branch = e.heteroclinic
    if target not in pic.saddles:
        raise NotGradientLikeSigma(f"{eid} ends on {target}, which is not in the {pic.side} picture")
    prev = _slot_predecessor(pic, target, branch, eid)
    return pic.walk_of_flag((prev, 1))


def _corner_at_slot(pic, point, branch):
    """Walk through the corner of ``point`` (in the picture) holding ``branch``."""
    br = pic.d.branches(point)
    i = SADDLE_ORDER.index(branch)
    before = SADDLE_ORDER[(i - 1) % 4]
    return pic.walk_of_flag(((br[before], "S"), 1))


# ---------------------------------------------------------------------------
# Tier 2: one saddle orbit at a time
# ---------------------------------------------------------------------------

T, K = "T", "K"
COROLLARY = {
    (1, 1): [
        ((K, K), (K, K)),
        ((T,), (T, T)),
        ((T, T), (T,)),
        ((K, T), (K,)),
        ((K,), (K, T)),
        ((T,), (T,)),  # only on non-orientable surfaces
    ],
    (-1, -1): [((K,), (K,)), ((T,), (T,))],
}


def corollary_case(otype, before, after, orientable):
    """Index of the matching case, ``None`` when none matches, ``-1`` when the
    orientation type is not covered."""
    cases = COROLLARY.get(tuple(otype))
    if cases is None:
        return -1
    key = (tuple(sorted(before)), tuple(sorted(after)))
    for i, case in enumerate(cases):
        if case == key:
            if otype == (1, 1) and i == 5 and orientable:
                return None
            return i
    return None


def _end_cycles(d, ends):
    perm = {e: d.f_ends[e] for e in ends}
    seen, out = set(), []
    for e in sorted(ends):
        if e in seen:
            continue
        cyc = [e]
        seen.add(e)
        x = perm[e]
        while x != e:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append(cyc)
    return out


def _anchor_index(summary):
    out = {}
    for i, c in enumerate(summary.components):
        for k in c.anchors:
            out[k] = i
    return out


def surgery_data(d, current, orbit):
    """Locate the unstable circles of ``orbit`` in ``current`` (attractor
    picture of its sigma) and the stable circles in the repeller picture of
    the enlarged set."""
    from .descriptor import surface_of

    sigma = frozenset(current.sigma)
    new = sigma | {orbit}
    if orbit in sigma or not is_valid_sigma(d, new):
        raise NotGradientLikeSigma(f"cannot add {orbit} to {sorted(sigma)}")
    o = d.orbit_by_id[orbit]
    pts = set(o.points)
    u_ends = [e.id for e in d.ends.values() if e.saddle in pts and e.unstable]
    s_ends = [e.id for e in d.ends.values() if e.saddle in pts and not e.unstable]

    a_pic = picture(d, sigma, "attractor")
    anchor = _anchor_index(current)
    u_classes = []
    for cyc in _end_cycles(d, u_ends):
        found = {anchor.get(a_pic.key(locate(a_pic, e))) for e in cyc}
        if None in found or len(found) != 1:
            raise InconsistentEmbedding(f"unstable circle {cyc} is not inside one known component")
        u_classes.append(found.pop())

    r_pic = picture(d, new, "repeller")
    r_sum = summary_from_picture(d, new, r_pic)
    _, r_cls = walk_classes(r_pic)
    order, s_classes, end_cls = [], [], []
    for cyc in _end_cycles(d, s_ends):
        found = {r_cls[locate(r_pic, e)] for e in cyc}
        if len(found) != 1:
            raise InconsistentEmbedding(f"stable circle {cyc} is not inside one component")
        c = found.pop()
        if c not in order:
            order.append(c)
        s_classes.append(order.index(c))
        end_cls.extend((e, order.index(c)) for e in cyc)
    return SaddleSurgeryData(
        orbit, tuple(o.orientation_type), len(u_classes), len(s_classes), tuple(u_classes),
        tuple(s_classes), tuple(r_sum.components[c] for c in order), tuple(end_cls), surface_of(d)[0],
    )


def surgery_step(current, data, check=True):
    """``V_sigma' = (V_sigma - v) + v'``; checks the transition against the
    Corollary case list (raises :class:`CaseViolation` when none matches)."""
    v = sorted(set(data.u_classes))
    before = [SHORT[current.components[i].surface_type] for i in v]
    after = [SHORT[c.surface_type] for c in data.s_components]
    if check and corollary_case(data.orientation_type, before, after, data.orientable) is None:
        raise CaseViolation(
            f"adding {data.orbit} {data.orientation_type}: {'+'.join(sorted(before))} -> "
            f"{'+'.join(sorted(after))} matches no listed case")
    kept = tuple(c for i, c in enumerate(current.components) if i not in v)
    fresh = tuple(ComponentClass(c.surface_type, c.multiplicity) for c in data.s_components)
    return CharSpaceSummary(frozenset(current.sigma) | {data.orbit}, kept + fresh, "surgery")


def reanchor(d, summary, data):
    """Attach attractor-picture walks of the enlarged set to the components of
    ``summary`` so the next step can locate circles."""
    pic = picture(d, summary.sigma, "attractor")
    orbits, cls = walk_classes(pic)
    keys = {pic.key(i): i for i in range(len(pic.walks))}
    n_kept = len(summary.components) - len(data.s_components)
    assign = {}
    for ci, c in enumerate(summary.components[:n_kept]):
        for k in c.anchors:
            if k not in keys:
                raise InconsistentEmbedding("a component untouched by the surgery changed its boundary")
            assign[cls[keys[k]]] = ci
    ends = dict(data.s_end_classes)
    for eid, j in ends.items():
        e = d.ends[eid]
        walk = _corner_at_slot(pic, e.saddle, e.branch)
        prev = assign.setdefault(cls[walk], n_kept + j)
        if prev != n_kept + j:
            raise InconsistentEmbedding("attractor and repeller pictures disagree after surgery")
    if sorted(assign) != list(range(len(orbits))) or sorted(set(assign.values())) != list(
            range(len(summary.components))):
        raise InconsistentEmbedding(
            f"surgery predicts {len(summary.components)} components, attractor picture has {len(orbits)}")
    comps = list(summary.components)
    for orb_i, ci in assign.items():
        c = comps[ci]
        if len(orbits[orb_i]) != c.multiplicity:
            raise InconsistentEmbedding("multiplicities disagree after surgery")
        comps[ci] = ComponentClass(c.surface_type, c.multiplicity,
                                   frozenset(pic.key(i) for i in orbits[orb_i]))
    return CharSpaceSummary(summary.sigma, tuple(comps), summary.method)


def tier2(d, sigma, check=True):
    """Tier 2: surgery along a linear extension, starting from the sinks."""
    sigma = frozenset(getattr(sigma, "orbits", sigma))
    cur = summary_from_picture(d, frozenset(), picture(d, frozenset(), "attractor"))
    for orbit in linear_extension(d, sigma):
        data = surgery_data(d, cur, orbit)
        cur = reanchor(d, surgery_step(cur, data, check=check), data)
    return CharSpaceSummary(sigma, cur.components, "surgery")


# ---------------------------------------------------------------------------
# decisions and reports
# ---------------------------------------------------------------------------

def summarize(d, sigma, check=False):
    """Tier 1 when a picture admits it, else Tier 2."""
    sigma = frozenset(getattr(sigma, "orbits", sigma))
    s = tier1(d, sigma)
    return s if s is not None else tier2(d, sigma, check=check)


@dataclass(frozen=True)
class Certificate:
    name: str
    rows: tuple  # (SigmaSet, CharSpaceSummary)
    witness: object = None

    def table(self):
        lines = [f"{'sigma':<40} {'count':>5}  components  (method)"]
        for sig, s in self.rows:
            lines.append(f"{sig.label():<40} {s.count:>5}  {s.describe()}  ({s.method})")
        return "\n".join(lines)

    def as_dict(self):
        return {
            "descriptor": self.name,
            "connected": self.witness is not None,
            "witness": None if self.witness is None else sorted(self.witness.orbits),
            "rows": [
                {
                    "sigma": sorted(sig.orbits),
                    "count": s.count,
                    "components": [
                        {"surface_type": c.surface_type, "multiplicity": c.multiplicity}
                        for c in sorted(s.components, key=lambda c: (c.surface_type, c.multiplicity))
                    ],
                    "method": s.method,
                }
                for sig, s in self.rows
            ],
        }


def has_connected_charspace(d):
    """``(True, certificate)`` with a witnessing sigma if some valid sigma has a
    connected orbit space, else ``(False, certificate)`` with the full table."""
    rows, witness = [], None
    for sig in enumerate_valid_sigma(d):
        s = summarize(d, sig.orbits)
        rows.append((sig, s))
        if witness is None and s.connected:
            witness = sig
    return witness is not None, Certificate(d.name, tuple(rows), witness)


@dataclass(frozen=True)
class Transition:
    sigma: frozenset
    orbit: str
    orientation_type: tuple
    before: tuple
    after: tuple
    case: int | None

    @property
    def ok(self):
        return self.case is not None

    def describe(self):
        tag = "uncovered type" if self.case == -1 else ("ok" if self.ok else "VIOLATION")
        return (f"{SigmaSet(self.sigma).label()} + {self.orbit} {self.orientation_type}: "
                f"{'+'.join(self.before) or '-'} -> {'+'.join(self.after) or '-'}  [{tag}]")


@dataclass(frozen=True)
class ConformanceReport:
    name: str
    transitions: tuple

    @property
    def violations(self):
        return tuple(t for t in self.transitions if not t.ok)

    def counts(self):
        return Counter((t.orientation_type, t.before, t.after, t.case) for t in self.transitions)


def transitions(d):
    """Every one-orbit extension of every valid sigma, as observed."""
    out = []
    for sig in enumerate_valid_sigma(d):
        cur = None
        for o in d.saddle_orbits():
            if o.id in sig.orbits or not is_valid_sigma(d, sig.orbits | {o.id}):
                continue
            if cur is None:
                cur = tier2(d, sig.orbits, check=False)
            data = surgery_data(d, cur, o.id)
            before = tuple(sorted(SHORT[cur.components[i].surface_type] for i in set(data.u_classes)))
            after = tuple(sorted(SHORT[c.surface_type] for c in data.s_components))
            case = corollary_case(data.orientation_type, before, after, data.orientable)
            out.append(Transition(sig.orbits, o.id, data.orientation_type, before, after, case))
    return out


def corollary_conformance(d):
    """Check every observed transition against the Corollary case list."""
    return ConformanceReport(d.name, tuple(transitions(d)))


def dual_consistent(d, sigma):
    a = charspace_of_sigma(d, sigma, "attractor")
    r = charspace_of_sigma(d, sigma, "repeller")
    return a.signature() == r.signature()
