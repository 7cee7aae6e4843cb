"""Hand-built descriptors of the base models.

Coordinates quoted in comments are in the stereographic chart from ``N``
(sphere models) or in ``[0, 1)^2`` (torus models).  End ids are
``"<saddle point>:<branch>"``.
"""
from __future__ import annotations

from .descriptor import SADDLE, SINK, SOURCE, MSDescriptor, OrbitRecord, SeparatrixEnd

ALL_BRANCHES = ("u+", "s+", "u-", "s-")


def build(name, orbits, attach, rotation, f_points, branch_map, heteroclinic=None, twist=None):
    """Assemble a descriptor from compact tables.

    ``orbits``: ``[(id, kind, otype, points)]``; ``attach``: ``{end: node}``;
    ``branch_map``: ``{saddle point: {branch: branch at f(point)}}``.
    """
    heteroclinic = heteroclinic or {}
    twist = twist or {}
    recs = tuple(OrbitRecord(i, k, len(pts), tuple(ot), tuple(pts)) for i, k, ot, pts in orbits)
    ends = {}
    saddles = [p for _, k, _, pts in orbits if k == SADDLE for p in pts]
    for p in saddles:
        for b in ALL_BRANCHES:
            eid = f"{p}:{b}"
            ends[eid] = SeparatrixEnd(eid, p, b, attach.get(eid), heteroclinic.get(eid), twist.get(eid, 1))
    f_ends = {}
    for p in saddles:
        q = f_points[p][0]
        for b in ALL_BRANCHES:
            f_ends[f"{p}:{b}"] = f"{q}:{branch_map[p][b]}"
    rotation = {k: tuple(v) for k, v in rotation.items()}
    return MSDescriptor(name, recs, ends, rotation, dict(f_points), f_ends)


IDENTITY = {b: b for b in ALL_BRANCHES}


def north_south():
    """Source ``N``, sink ``S``, nothing else."""
    return build(
        "north_south",
        [("omega", SINK, (1,), ["S"]), ("alpha", SOURCE, (1,), ["N"])],
        {}, {}, {"S": ("S", 1), "N": ("N", 1)}, {},
    )


def psi0():
    # sources N and O=(0,0); sinks w0=(1,0), w1=(-1,0); saddles s=(0,1), t=(0,-1)
    attach = {
        "s:u+": "w0", "s:u-": "w1", "s:s+": "N", "s:s-": "O",
        "t:u+": "w0", "t:u-": "w1", "t:s+": "O", "t:s-": "N",
    }
    rotation = {
        "w0": ["s:u+", "t:u+"], "w1": ["s:u-", "t:u-"],
        "O": ["s:s-", "t:s+"], "N": ["s:s+", "t:s-"],
    }
    swap_s = {"u+": "u+", "u-": "u-", "s+": "s-", "s-": "s+"}
    f_points = {p: (p, -1) for p in ("N", "O", "w0", "w1")}
    f_points["s"] = ("t", -1)
    f_points["t"] = ("s", -1)
    return build(
        "psi0",
        [
            ("alpha1", SOURCE, (-1,), ["N"]), ("alpha2", SOURCE, (-1,), ["O"]),
            ("omega0", SINK, (-1,), ["w0"]), ("omega1", SINK, (-1,), ["w1"]),
            ("sigma", SADDLE, (1, 1), ["s", "t"]),
        ],
        attach, rotation, f_points, {"s": swap_s, "t": swap_s},
    )


def psitilde1():
    # canonical lifts: a = N, w = (1,0,0), s = (0,1,0)
    attach = {"s:u+": "w", "s:u-": "w", "s:s+": "a", "s:s-": "a"}
    twist = {"s:u-": -1, "s:s-": -1}
    flip = {"u+": "u-", "u-": "u+", "s+": "s-", "s-": "s+"}
    return build(
        "psitilde1",
        [("alpha", SOURCE, (-1,), ["a"]), ("omega", SINK, (-1,), ["w"]), ("sigma1", SADDLE, (-1, -1), ["s"])],
        attach, {"w": ["s:u+", "s:u-"], "a": ["s:s+", "s:s-"]},
        {"a": ("a", -1), "w": ("w", -1), "s": ("s", 1)}, {"s": flip}, twist=twist,
    )


def _torus_tables():
    # alpha=(0,0), omega=(1/2,1/2), s1=(0,1/2), s2=(1/2,0)
    attach = {
        "s1:u+": "w", "s1:u-": "w", "s1:s+": "a", "s1:s-": "a",
        "s2:u+": "w", "s2:u-": "w", "s2:s+": "a", "s2:s-": "a",
    }
    rotation = {
        "w": ["s1:u-", "s2:u-", "s1:u+", "s2:u+"],
        "a": ["s2:s+", "s1:s-", "s2:s-", "s1:s+"],
    }
    return attach, rotation


def f1_torus():
    attach, rotation = _torus_tables()
    return build(
        "F1_torus",
        [
            ("alpha", SOURCE, (1,), ["a"]), ("omega", SINK, (1,), ["w"]),
            ("sigma1", SADDLE, (1, 1), ["s1"]), ("sigma2", SADDLE, (1, 1), ["s2"]),
        ],
        attach, rotation, {p: (p, 1) for p in ("a", "w", "s1", "s2")}, {"s1": IDENTITY, "s2": IDENTITY},
    )


def psi1():
    attach, rotation = _torus_tables()
    swap_s = {"u+": "u+", "u-": "u-", "s+": "s-", "s-": "s+"}
    return build(
        "psi1",
        [("alpha", SOURCE, (-1,), ["a"]), ("omega", SINK, (-1,), ["w"]), ("sigma1", SADDLE, (1, 1), ["s1", "s2"])],
        attach, rotation,
        {"a": ("a", -1), "w": ("w", -1), "s1": ("s2", -1), "s2": ("s1", -1)},
        {"s1": swap_s, "s2": swap_s},
    )


def xi0():
    # N; a2=(1/16,0); p0=(1/4,0) (sigma0); S; p=(-4,0) (sigma); w0=(-16,0)
    attach = {
        "p0:u+": "S", "p0:u-": "S", "p0:s+": "a2",
        "p:u+": "w0", "p:s+": "N", "p:s-": "N",
    }
    het = {"p:u-": ("p0", "s-"), "p0:s-": ("p", "u-")}
    rotation = {"S": ["p0:u+", "p0:u-"], "w0": ["p:u+"], "a2": ["p0:s+"], "N": ["p:s+", "p:s-"]}
    return build(
        "xi0",
        [
            ("alpha1", SOURCE, (1,), ["N"]), ("alpha2", SOURCE, (1,), ["a2"]),
            ("omega0", SINK, (1,), ["w0"]), ("omega", SINK, (1,), ["S"]),
            ("sigma0", SADDLE, (1, 1), ["p0"]), ("sigma", SADDLE, (1, 1), ["p"]),
        ],
        attach, rotation, {x: (x, 1) for x in ("N", "a2", "p0", "S", "p", "w0")},
        {"p0": IDENTITY, "p": IDENTITY}, heteroclinic=het,
    )


GOLDEN = {
    "north_south": north_south,
    "psi0": psi0,
    "psitilde1": psitilde1,
    "F1_torus": f1_torus,
    "psi1": psi1,
    "xi0": xi0,
}


def golden(name):
    return GOLDEN[name]()
