"""Ribbon graphs with twist signs, described by flags.

A *dart* is a hashable half-edge.  Each vertex carries a cyclic order of its
darts with respect to a chosen local orientation; each edge joins two darts
and carries a twist sign (+1 when the local orientations at its ends agree
along the edge).  A *flag* is ``(dart, side)`` where ``side = +1`` is the
counter-clockwise side of the dart.

Boundary components of the thickened graph are orbits of the two involutions

* ``alpha0``: cross the edge, ``(d, s) -> (partner(d), -s * twist)``
* ``alpha1``: turn around the vertex, ``(d, +1) <-> (next(d), -1)``

Walks are traversed alternating ``alpha0, alpha1, alpha0, ...`` from their
first flag, so even positions are followed by an edge step and odd positions
by a corner step.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Walk:
    """One boundary component.

    ``flags`` is the traversal; an isolated vertex gives a walk with no flags
    and ``vertex`` set.
    """

    flags: tuple = ()
    vertex: object = None

    @property
    def isolated(self):
        return not self.flags


@dataclass
class RibbonGraph:
    rotation: dict  # vertex -> list of darts (cyclic, ccw)
    partner: dict  # dart -> dart
    twist: dict  # dart -> +-1 (same value on both darts of an edge)
    _vertex_of: dict = field(init=False, repr=False)
    _next: dict = field(init=False, repr=False)
    _prev: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._vertex_of, self._next, self._prev = {}, {}, {}
        for v, darts in self.rotation.items():
            n = len(darts)
            for i, d in enumerate(darts):
                self._vertex_of[d] = v
                self._next[d] = darts[(i + 1) % n]
                self._prev[d] = darts[(i - 1) % n]

    def vertex_of(self, dart):
        return self._vertex_of[dart]

    def next(self, dart):
        return self._next[dart]

    def prev(self, dart):
        return self._prev[dart]

    def alpha0(self, flag):
        d, s = flag
        return self.partner[d], -s * self.twist[d]

    def alpha1(self, flag):
        d, s = flag
        if s > 0:
            return self._next[d], -1
        return self._prev[d], +1

    def flags(self):
        for darts in self.rotation.values():
            for d in darts:
                yield (d, +1)
                yield (d, -1)

    def walks(self):
        """All boundary walks, in a deterministic order."""
        seen = set()
        out = []
        for v, darts in self.rotation.items():
            if not darts:
                out.append(Walk((), v))
                continue
            for d in darts:
                for s in (+1, -1):
                    x = (d, s)
                    if x in seen:
                        continue
                    seq = []
                    y = x
                    while True:
                        seq.append(y)
                        seen.add(y)
                        y = self.alpha0(y)
                        seq.append(y)
                        seen.add(y)
                        y = self.alpha1(y)
                        if y == x:
                            break
                    out.append(Walk(tuple(seq)))
        return out


def walk_index(walks):
    """Map flag -> (walk number, position) and isolated vertex -> walk number."""
    flag_pos = {}
    iso = {}
    for i, w in enumerate(walks):
        if w.isolated:
            iso[w.vertex] = i
        for j, x in enumerate(w.flags):
            flag_pos[x] = (i, j)
    return flag_pos, iso


def corner_sense(walk, position):
    """Rotational sense (+1 ccw, -1 cw) in which ``walk`` turns at the corner
    containing the flag at ``position``, and the ccw-first dart of that corner."""
    flags = walk.flags
    if position % 2 == 1:
        d, s = flags[position]
        nxt = flags[(position + 1) % len(flags)]
    else:
        d, s = flags[(position - 1) % len(flags)]
        nxt = flags[position]
    # the walk turns from (d, s) to nxt = alpha1((d, s))
    if s > 0:
        return +1, d
    return -1, nxt[0]


def cycle_orbits(perm):
    """Cycles of a permutation given as a dict, in deterministic order."""
    seen = set()
    out = []
    for x in perm:
        if x in seen:
            continue
        cyc = [x]
        seen.add(x)
        y = perm[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = perm[y]
        out.append(cyc)
    return out


def same_cycle(a, b):
    """True if the sequences ``a`` and ``b`` are equal as cyclic sequences."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    for k in range(n):
        if all(a[(k + i) % n] == b[i] for i in range(n)):
            return True
    return False
