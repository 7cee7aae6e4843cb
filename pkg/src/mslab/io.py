"""Descriptor files, format ``msd-1`` (JSON; schema in ``data/msd-1.schema.json``)."""
from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from .descriptor import MSDescriptor, OrbitRecord, SeparatrixEnd, validate
from .errors import SchemaError

VERSION = "msd-1"


@lru_cache(maxsize=1)
def schema():
    return json.loads(resources.files("mslab").joinpath("data").joinpath("msd-1.schema.json").read_text("utf-8"))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    return x


def to_dict(d):
    ends = []
    for e in d.ends.values():
        het = None if e.heteroclinic is None else {"saddle": e.heteroclinic[0], "branch": e.heteroclinic[1]}
        ends.append({"id": e.id, "saddle": e.saddle, "branch": e.branch, "node": e.node,
                     "heteroclinic": het, "twist": e.twist})
    out = {
        "version": VERSION,
        "name": d.name,
        "orbits": [{"id": o.id, "kind": o.kind, "period": o.period,
                    "orientation_type": list(o.orientation_type), "points": list(o.points)} for o in d.orbits],
        "ends": ends,
        "rotation": {p: list(v) for p, v in d.rotation.items()},
        "f_action": {"points": {p: {"image": q, "eps": s} for p, (q, s) in d.f_points.items()},
                     "ends": dict(d.f_ends)},
        "smale_order": sorted([a, b] for a, b in d.smale_order),
    }
    if d.meta:
        out["meta"] = _jsonable(d.meta)
    return out


def dumps(d):
    return json.dumps(to_dict(d), indent=2, ensure_ascii=False) + "\n"


def write(d, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(d))


def _line_of(text, path):
    """Line of the last key in ``path`` found by scanning forward (best effort)."""
    if text is None:
        return None
    pos = 0
    for key in path:
        if isinstance(key, str):
            m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, pos)
            if m is None:
                break
            pos = m.start()
    return text.count("\n", 0, pos) + 1


def _check_refs(obj):
    """Cross-references the schema cannot express; ``(message, field)`` or None."""
    points = {p for o in obj["orbits"] for p in o["points"]}
    kinds = {p: o["kind"] for o in obj["orbits"] for p in o["points"]}
    end_ids = {e["id"] for e in obj["ends"]}
    for k, o in enumerate(obj["orbits"]):
        want = 2 if o["kind"] == "saddle" else 1
        if len(o["orientation_type"]) != want:
            return f"orientation type of a {o['kind']} has {want} entries", f"orbits/{k}/orientation_type"
        if len(o["points"]) != o["period"]:
            return "number of points differs from the period", f"orbits/{k}/points"
    for k, e in enumerate(obj["ends"]):
        if kinds.get(e["saddle"]) != "saddle":
            return f"unknown saddle {e['saddle']!r}", f"ends/{k}/saddle"
        if e["node"] is not None and e["node"] not in points:
            return f"unknown node {e['node']!r}", f"ends/{k}/node"
        if (e["node"] is None) == (e["heteroclinic"] is None):
            return "exactly one of node and heteroclinic must be set", f"ends/{k}"
    for p, ids in obj["rotation"].items():
        if p not in points:
            return f"unknown node {p!r}", f"rotation/{p}"
        bad = [i for i in ids if i not in end_ids]
        if bad:
            return f"unknown end {bad[0]!r}", f"rotation/{p}"
    fp = obj["f_action"]["points"]
    if set(fp) != points or any(v["image"] not in points for v in fp.values()):
        return "f must act on exactly the listed points", "f_action/points"
    fe = obj["f_action"]["ends"]
    if set(fe) != end_ids or any(v not in end_ids for v in fe.values()):
        return "f must act on exactly the listed ends", "f_action/ends"
    return None


def from_dict(obj, text=None):
    try:
        jsonschema.validate(obj, schema())
    except jsonschema.ValidationError as exc:
        path = list(exc.absolute_path)
        if exc.validator == "required":
            missing = re.findall(r"'([^']+)' is a required property", exc.message)
            path += missing[:1]
        field = "/".join(str(p) for p in path) or None
        raise SchemaError(exc.message, field=field, line=_line_of(text, path)) from None
    bad = _check_refs(obj)
    if bad is not None:
        msg, field = bad
        raise SchemaError(msg, field=field, line=_line_of(text, field.split("/")))
    orbits = tuple(OrbitRecord(o["id"], o["kind"], o["period"], tuple(o["orientation_type"]), tuple(o["points"]))
                   for o in obj["orbits"])
    ends = {}
    for e in obj["ends"]:
        het = e["heteroclinic"]
        ends[e["id"]] = SeparatrixEnd(e["id"], e["saddle"], e["branch"], e["node"],
                                      None if het is None else (het["saddle"], het["branch"]), e["twist"])
    d = MSDescriptor(
        obj["name"], orbits, ends,
        {p: tuple(v) for p, v in obj["rotation"].items()},
        {p: (v["image"], v["eps"]) for p, v in obj["f_action"]["points"].items()},
        dict(obj["f_action"]["ends"]),
        obj.get("meta", {}),
    )
    listed = {tuple(x) for x in obj["smale_order"]}
    if listed != set(d.smale_order):
        raise SchemaError("smale_order disagrees with the heteroclinic ends", field="smale_order",
                          line=_line_of(text, ["smale_order"]))
    problems = validate(d)
    if problems:
        raise SchemaError("inconsistent descriptor: " + "; ".join(problems))
    return d


def loads(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc.msg}", line=exc.lineno) from None
    return from_dict(obj, text)


def read(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
