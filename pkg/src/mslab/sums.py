"""Connected sums of descriptors along a sink orbit and a source orbit.

The neighbourhood of each sink point ``w_k`` of ``d1`` is replaced by the
complement of the source point ``a_k`` of ``d2``.  Local orientations at the
``a_k`` are re-chosen so that ``eps`` agrees along the two orbits; with that
choice the neck carries counter-clockwise at ``w_k`` to clockwise at ``a_k``.

An *interleaving* is the merged cyclic order, counter-clockwise at ``w_0``,
of the unstable ends of ``d1`` at ``w_0`` and the stable ends of ``d2`` at
``a_0``.  An unstable end lying in the gap before stable end ``t`` enters the
sector of ``a_k`` counter-clockwise after ``t`` and lands at the sink of that
cell of ``d2``; stable ends of ``d2`` are continued backwards into ``d1``
symmetrically.
"""
from __future__ import annotations

from dataclasses import replace
from itertools import combinations

from .descriptor import SADDLE, SINK, SOURCE, MSDescriptor, OrbitRecord, SeparatrixEnd, reorient
from .errors import (
    InconsistentEmbedding,
    NonEquivariantInterleaving,
    OrientationTypeMismatch,
    PeriodMismatch,
)
from .ribbon import corner_sense, same_cycle, walk_index


def _fresh(name, taken):
    if name not in taken:
        return name
    n = 2
    base = name
    while f"{base}_{n}" in taken:
        n += 1
    return f"{base}_{n}"


def relabel(d, taken_points, taken_orbits):
    """Rename points and orbits of ``d`` that collide with the given sets."""
    pmap, omap = {}, {}
    used_p, used_o = set(taken_points), set(taken_orbits)
    for o in d.orbits:
        omap[o.id] = _fresh(o.id, used_o)
        used_o.add(omap[o.id])
        for p in o.points:
            pmap[p] = _fresh(p, used_p)
            used_p.add(pmap[p])
    emap = {}
    for eid, e in d.ends.items():
        emap[eid] = f"{pmap[e.saddle]}:{e.branch}" if eid == f"{e.saddle}:{e.branch}" or pmap[e.saddle] != e.saddle else eid
    orbits = tuple(replace(o, id=omap[o.id], points=tuple(pmap[p] for p in o.points)) for o in d.orbits)
    ends = {}
    for eid, e in d.ends.items():
        het = None if e.heteroclinic is None else (pmap[e.heteroclinic[0]], e.heteroclinic[1])
        node = None if e.node is None else pmap[e.node]
        ends[emap[eid]] = replace(e, id=emap[eid], saddle=pmap[e.saddle], node=node, heteroclinic=het)
    rotation = {pmap[p]: tuple(emap[x] for x in r) for p, r in d.rotation.items()}
    f_points = {pmap[p]: (pmap[q], s) for p, (q, s) in d.f_points.items()}
    f_ends = {emap[a]: emap[b] for a, b in d.f_ends.items()}
    return replace(d, orbits=orbits, ends=ends, rotation=rotation, f_points=f_points, f_ends=f_ends), pmap, omap, emap


# ---------------------------------------------------------------------------
# interleavings
# ---------------------------------------------------------------------------

def _transport(d1, d2, merged, k, W):
    """Merged order at ``w_{k+1}`` from the one at ``w_k``."""
    out = [("u", d1.f_ends[e]) if t == "u" else ("s", d2.f_ends[e]) for t, e in merged]
    if d1.eps(W[k]) < 0:
        out.reverse()
    return out


def merged_orders(d1, d2, W, merged0):
    """Transport ``merged0`` around the orbit; raise if it does not close up."""
    orders = [list(merged0)]
    for k in range(len(W)):
        orders.append(_transport(d1, d2, orders[-1], k, W))
    if not same_cycle(orders[-1], orders[0]):
        raise NonEquivariantInterleaving("interleaving is not invariant under the first-return map")
    return orders[:-1]


def _merges(U, S):
    """All cyclic merges of ``U`` and ``S`` keeping both cyclic orders, each
    written starting from ``U[0]``."""
    a, b = len(U), len(S)
    if a == 0:
        yield [("s", x) for x in S]
        return
    if b == 0:
        yield [("u", x) for x in U]
        return
    for r in range(b):
        rot = S[r:] + S[:r]
        # place b stable ends into a gaps (after each unstable end)
        for bars in combinations(range(a + b - 1), a - 1):
            sizes, prev = [], -1
            for x in bars:
                sizes.append(x - prev - 1)
                prev = x
            sizes.append(a + b - 2 - prev)
            merged, j = [], 0
            for i in range(a):
                merged.append(("u", U[i]))
                for _ in range(sizes[i]):
                    merged.append(("s", rot[j]))
                    j += 1
            yield merged


def _spread(merged):
    """Imbalance of the interleaving: 0 when it alternates evenly."""
    def gaps(kind):
        pos = [i for i, (t, _) in enumerate(merged) if t == kind]
        n = len(merged)
        if not pos:
            return [0]
        return [((pos[(i + 1) % len(pos)] - pos[i] - 1) % n) if len(pos) > 1 else n - 1 for i in range(len(pos))]

    gu, gs = gaps("u"), gaps("s")
    return (max(gu) - min(gu)) + (max(gs) - min(gs))


def default_interleaving(d1, d2, W, A):
    """The most evenly spread equivariant interleaving (deterministic)."""
    U = list(d1.rotation.get(W[0], ()))
    S = list(reversed(d2.rotation.get(A[0], ())))
    best = None
    for merged in _merges(U, S):
        score = _spread(merged)
        if best is not None and score >= best[0]:
            continue
        try:
            merged_orders(d1, d2, W, merged)
        except NonEquivariantInterleaving:
            continue
        best = (score, merged)
        if score == 0:
            break
    if best is None:
        raise NonEquivariantInterleaving("no equivariant interleaving exists")
    return best[1]


def _check_interleaving(d1, d2, W, A, merged):
    U = [e for t, e in merged if t == "u"]
    S = [e for t, e in merged if t == "s"]
    if not same_cycle(U, d1.rotation.get(W[0], ())) or not same_cycle(
            S, list(reversed(d2.rotation.get(A[0], ())))):
        raise InconsistentEmbedding("interleaving does not respect the cyclic orders at the glued points")


# ---------------------------------------------------------------------------
# re-attachment
# ---------------------------------------------------------------------------

def _gaps(merged, kind):
    """``{boundary token: ends of the other kind before it}`` where the boundary
    token is the next token of ``kind`` after the gap (cyclically)."""
    n = len(merged)
    start = next(i for i, (t, _) in enumerate(merged) if t == kind)
    out = {}
    seq = []
    for j in range(1, n + 1):
        t, e = merged[(start + j) % n]
        if t == kind:
            out[e] = seq
            seq = []
        else:
            seq.append(e)
    return out


def _prev_of_kind(merged, kind):
    """``{token of kind: the token of the same kind before it}``."""
    pos = [e for t, e in merged if t == kind]
    return {pos[i]: pos[i - 1] for i in range(len(pos))}


def _cell_corner(d, walks, where, flag, kind):
    """Corner of the unique ``kind`` node in the boundary walk through ``flag``.

    Returns ``(node, ccw-first dart, sense at that node, sense at flag)``.
    """
    i, pos = where[flag]
    walk = walks[i]
    s0, _ = corner_sense(walk, pos)
    found = {}
    for j in range(1, len(walk.flags), 2):
        (eid, tag), _ = walk.flags[j]
        e = d.ends[eid]
        v = e.saddle if tag == "S" else e.node
        if d.kind(v) != kind:
            continue
        sense, first = corner_sense(walk, j)
        found[(v, first)] = sense
    if len(found) != 1:
        raise InconsistentEmbedding(f"cell through {flag} has {len(found)} {kind} corners")
    (v, first), sense = next(iter(found.items()))
    return v, first, sense, s0


def _insert(rotation, node, after, seq):
    """Insert ``seq`` counter-clockwise after end ``after`` at ``node``."""
    r = list(rotation[node])
    i = r.index(after)
    rotation[node] = tuple(r[: i + 1] + list(seq) + r[i + 1:])


def _isolated(d, kind):
    return [p for p in d.points(kind) if not d.rotation.get(p)]


# ---------------------------------------------------------------------------
# the sum
# ---------------------------------------------------------------------------

def connected_sum(d1, omega, d2, alpha, interleaving=None, name=None):
    """``d1 # d2`` along the sink orbit ``omega`` of ``d1`` and the source orbit
    ``alpha`` of ``d2``.

    ``interleaving`` is a sequence of end ids (unstable ends of ``d1`` at the
    first point of ``omega`` and stable ends of ``d2`` at the first point of
    ``alpha``) in counter-clockwise order at that sink point.
    """
    from .descriptor import validate

    o1, o2 = d1.orbit_by_id[omega], d2.orbit_by_id[alpha]
    if o1.kind != SINK or o2.kind != SOURCE:
        raise ValueError("connected sum needs a sink of the first and a source of the second descriptor")
    if o1.period != o2.period:
        raise PeriodMismatch(f"periods {o1.period} and {o2.period} differ")
    if tuple(o1.orientation_type) != tuple(o2.orientation_type):
        raise OrientationTypeMismatch(
            f"orientation types {o1.orientation_type} and {o2.orientation_type} differ")
    W, m = list(o1.points), o1.period
    taken_p = set(d1.points()) - set(W)
    taken_o = {o.id for o in d1.orbits if o.id != omega}
    d2r, pmap, omap, emap = relabel(d2, taken_p, taken_o)
    A = [pmap[a] for a in o2.points]
    for k in range(m - 1):
        if d2r.eps(A[k]) != d1.eps(W[k]):
            d2r = reorient(d2r, A[k + 1])
    assert d2r.eps(A[m - 1]) == d1.eps(W[m - 1])

    if interleaving is None:
        merged = default_interleaving(d1, d2r, W, A)
    else:
        u_ids = set(d1.rotation.get(W[0], ()))
        merged = [("u", e) if e in u_ids else ("s", emap.get(e, e)) for e in interleaving]
        _check_interleaving(d1, d2r, W, A, merged)
    orders = merged_orders(d1, d2r, W, merged)

    if set(d1.ends) & set(d2r.ends):
        raise InconsistentEmbedding("separatrix ids collide")
    ends = {**d1.ends, **d2r.ends}
    rotation = {p: tuple(r) for p, r in d1.rotation.items() if p not in W}
    rotation.update({p: tuple(r) for p, r in d2r.rotation.items() if p not in A})
    walks1, walks2 = d1.ribbon().walks(), d2r.ribbon().walks()
    where1, _ = walk_index(walks1)
    where2, _ = walk_index(walks2)

    def reattach(eid, node, sign):
        e = ends[eid]
        ends[eid] = replace(e, node=node, twist=e.twist * sign)

    for k in range(m):
        merged = orders[k]
        us = [e for t, e in merged if t == "u"]
        ss = [e for t, e in merged if t == "s"]
        if us and ss:
            for t_next, seq in _gaps(merged, "s").items():
                if not seq:
                    continue
                v, first, s_w, s_a = _cell_corner(d2r, walks2, where2, ((t_next, "N"), 1), SINK)
                order = seq if s_a == s_w else seq[::-1]
                for e in seq:
                    reattach(e, v, s_a * s_w)
                _insert(rotation, v, first[0], order)
            prev = _prev_of_kind(merged, "u")
            for a_next, seq in _gaps(merged, "u").items():
                if not seq:
                    continue
                v, first, s_v, s_w = _cell_corner(d1, walks1, where1, ((prev[a_next], "N"), 1), SOURCE)
                order = seq[::-1] if s_w == s_v else seq
                for e in seq:
                    reattach(e, v, s_w * s_v)
                _insert(rotation, v, first[0], order)
        elif us:
            v = _lonely(d2r, SINK, m)
            for e in us:
                reattach(e, v, 1)
            rotation[v] = tuple(us)
        elif ss:
            v = _lonely(d1, SOURCE, m)
            for e in ss:
                reattach(e, v, 1)
            rotation[v] = tuple(reversed(ss))

    orbits = tuple(o for o in d1.orbits if o.id != omega) + tuple(
        o for o in d2r.orbits if o.id != omap[alpha])
    f_points = {p: v for p, v in d1.f_points.items() if p not in W}
    f_points.update({p: v for p, v in d2r.f_points.items() if p not in A})
    out = MSDescriptor(
        name or f"{d1.name}#{d2.name}", orbits, ends, rotation, f_points,
        {**d1.f_ends, **d2r.f_ends},
        meta={"interleaving": [e for _, e in orders[0]]},
    )
    problems = validate(out)
    if problems:
        raise InconsistentEmbedding("connected sum is inconsistent: " + "; ".join(problems[:3]))
    return out


def _lonely(d, kind, m):
    """The node receiving all ends when the glued point of the other summand
    carries none (that summand is then a source-sink sphere)."""
    cand = [p for p in d.points(kind) if not d.rotation.get(p)]
    if m != 1 or len(cand) != 1:
        raise InconsistentEmbedding(f"cannot route separatrices: {len(cand)} free {kind} points, period {m}")
    return cand[0]
