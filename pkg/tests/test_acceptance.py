"""One test per acceptance criterion; each records a PASS/FAIL line that is
repeated in the terminal summary."""
from collections import Counter

import numpy as np

from mslab.charspace import (
    charspace_of_sigma,
    corollary_conformance,
    dual_consistent,
    enumerate_valid_sigma,
    has_connected_charspace,
    is_valid_sigma,
    summarize,
    tier1,
    tier2,
)
from mslab.cli import main
from mslab.descriptor import SINK, SOURCE, is_isomorphic
from mslab.errors import MSLabError, NotGradientLikeSigma
from mslab.families import FAMILIES, FAMILY_MIN, build
from mslab.fixtures import GOLDEN, golden
from mslab.models import BASE_MODELS, conjugacy_residual

A, B = 32 / 257, 255 / 257
C, D = 8 / 17, 15 / 17
# exact positions: model -> [(kind, period, point)]
EXPECTED = {
    "psi0": [("source", 1, (0, 0, 1)), ("source", 1, (0, 0, -1)), ("sink", 1, (1, 0, 0)),
             ("sink", 1, (-1, 0, 0)), ("saddle", 2, (0, 1, 0)), ("saddle", 2, (0, -1, 0))],
    "psitilde1": [("source", 1, (0, 0, 1)), ("saddle", 1, (0, 1, 0)), ("sink", 1, (1, 0, 0))],
    "psi1": [("source", 1, (0, 0)), ("sink", 1, (0.5, 0.5)), ("saddle", 2, (0.5, 0)), ("saddle", 2, (0, 0.5))],
    "F1_torus": [("source", 1, (0, 0)), ("sink", 1, (0.5, 0.5)), ("saddle", 1, (0.5, 0)),
                 ("saddle", 1, (0, 0.5))],
    "xi0": [("source", 1, (0, 0, 1)), ("sink", 1, (0, 0, -1)), ("sink", 1, (-A, 0, B)),
            ("saddle", 1, (-C, 0, D)), ("saddle", 1, (C, 0, -D)), ("source", 1, (A, 0, -B))],
    "north_south": [("source", 1, (0, 0, 1)), ("sink", 1, (0, 0, -1))],
}


def distance(kind, p, q):
    p, q = np.asarray(p, float), np.asarray(q, float)
    if kind == "torus":
        d = np.abs(p - q) % 1.0
        return float(np.linalg.norm(np.minimum(d, 1 - d)))
    if kind == "rp2":
        return float(min(np.linalg.norm(p - q), np.linalg.norm(p + q)))
    return float(np.linalg.norm(p - q))


def fixtures():
    """Golden descriptors plus the families over their checked ranges."""
    out = [golden(n) for n in sorted(GOLDEN)]
    out += [build("fg", g) for g in range(1, 5)]
    out += [build(f, n) for f in ("ftq", "xig", "xitq") for n in range(1, 5)]
    return out


def test_criterion_01_model_inventories(analyzed, report):
    worst_pos, worst_margin, problems = 0.0, np.inf, []
    for name in BASE_MODELS:
        an = analyzed(name)
        surface = an.model.surface.kind
        recs = an.records
        if Counter((r.kind, r.period) for r in recs) != Counter((k, m) for k, m, _ in EXPECTED[name]):
            problems.append(f"{name}: inventory")
            continue
        for kind, m, point in EXPECTED[name]:
            worst_pos = max(worst_pos, min(distance(surface, r.point, point) for r in recs
                                           if (r.kind, r.period) == (kind, m)))
        worst_margin = min(worst_margin, min(r.margin for r in recs))
        if not is_isomorphic(an.descriptor, golden(name)):
            problems.append(f"{name}: descriptor")
    xi0 = analyzed("xi0").descriptor
    edges = sorted(xi0.smale_order)
    ok = not problems and worst_pos <= 1e-8 and worst_margin >= 1e-3 and len(edges) == 1
    assert report(ok, f"max position error {worst_pos:.1e}, min margin {worst_margin:.3f}, "
                      f"xi0 Smale edges {len(edges)} {problems or ''}")


def test_criterion_02_proposition_1(analyzed, report):
    descs = fixtures() + [analyzed(n).descriptor for n in BASE_MODELS]
    checked, bad = 0, []
    for d in descs:
        top = frozenset(o.id for o in d.saddle_orbits())
        for side, kind, sigma in (("attractor", SINK, frozenset()), ("repeller", SOURCE, top)):
            comps = charspace_of_sigma(d, sigma, side).components
            for o in d.orbits:
                if o.kind != kind:
                    continue
                (c,) = [c for c in comps if ("vertex", o.points[0]) in c.anchors]
                checked += 1
                if (c.surface_type == "torus") != (o.orientation_type == (1,)) or c.multiplicity != o.period:
                    bad.append(f"{d.name}:{o.id}")
    assert report(not bad, f"{checked} node orbits in {len(descs)} descriptors {bad or ''}")


def family_counts(family, ns):
    out = {}
    for n in ns:
        _, cert = has_connected_charspace(build(family, n))
        out[n] = cert
    return out


def test_criterion_03_lemma_fg(report, tmp_path, capsys):
    certs = family_counts("fg", range(0, 5))
    low = min(s.count for c in certs.values() for _, s in c.rows)
    code = main(["verify", "--family", "fg", "--range", "0..4", "--certificate", str(tmp_path / "fg.json")])
    out = capsys.readouterr().out
    ok = low >= 2 and code == 0 and "verify: PASS" in out
    assert report(ok, f"g=0..4: {sum(len(c.rows) for c in certs.values())} valid Σ, "
                      f"min count {low}, verify exit {code}")


def test_criterion_04_lemma_ftq(report):
    certs = family_counts("ftq", range(1, 5))
    low = min(s.count for c in certs.values() for _, s in c.rows)
    empty = {n: next(s for sig, s in c.rows if not sig.orbits).signature() for n, c in certs.items()}
    two_klein = all(v == (("klein_bottle", 1), ("klein_bottle", 1)) for v in empty.values())
    assert report(low >= 2 and two_klein, f"q=1..4: min count {low}, Σ=∅ gives two Klein bottles: {two_klein}")


def test_criterion_05_lemma_xi(report):
    rows = []
    for family in ("xig", "xitq"):
        for n in range(1, 4):
            d = build(family, n)
            connected, cert = has_connected_charspace(d)
            table = {sig.orbits: s.count for sig, s in cert.rows}
            rows.append((not connected and table[frozenset()] == 2 and table[frozenset({"sigma0"})] == 3
                         and not is_valid_sigma(d, {"sigma"}), d.name))
    bad = [name for ok, name in rows if not ok]
    assert report(not bad, f"{len(rows)} descriptors: none connected, ∅→2, {{σ₀}}→3, {{σ}} invalid {bad or ''}")


def test_criterion_06_positive_controls(report):
    want = {"psi1": "klein_bottle", "F1_torus": "torus", "north_south": "torus"}
    got = {}
    for name, kind in want.items():
        s = summarize(golden(name), ())
        got[name] = s.connected and s.components[0].surface_type == kind and has_connected_charspace(golden(name))[0]
    assert report(all(got.values()), ", ".join(f"{k} {'ok' if v else 'WRONG'}" for k, v in got.items()))


def test_criterion_07_oracle(analyzed, report):
    from mslab.analysis import charspace_oracle

    checked, bad = 0, []
    for name in BASE_MODELS:
        an = analyzed(name)
        for sig in enumerate_valid_sigma(an.descriptor):
            s = summarize(an.descriptor, sig.orbits)
            try:
                o = charspace_oracle(an, sig.orbits, grid_n=64)
            except MSLabError as exc:
                bad.append(f"{name} {sig.label()}: {exc}")
                continue
            checked += 1
            if (o.count, o.cycle_type) != (s.set_count, s.cycle_type()):
                bad.append(f"{name} {sig.label()}")
    assert report(not bad, f"{checked} (model, Σ) pairs agree at grids 64 and 128 {bad or ''}")


def test_criterion_08_dual_and_tiers(report):
    tiers = duals = 0
    bad = []
    for d in fixtures():
        for sig in enumerate_valid_sigma(d):
            a = tier1(d, sig.orbits)
            if a is not None:
                tiers += 1
                if a.signature() != tier2(d, sig.orbits, check=False).signature():
                    bad.append(f"tier {d.name} {sig.label()}")
            try:
                duals += 1
                if not dual_consistent(d, sig.orbits):
                    bad.append(f"dual {d.name} {sig.label()}")
            except NotGradientLikeSigma:
                duals -= 1
    assert report(not bad, f"{tiers} tier comparisons, {duals} dual comparisons {bad[:3] or ''}")


def test_criterion_09_corollary_conformance(report):
    total, violations = 0, []
    for d in fixtures():
        r = corollary_conformance(d)
        total += len(r.transitions)
        violations += [f"{d.name}: {t.describe()}" for t in r.violations]
    assert report(not violations, f"{total} transitions, {len(violations)} violations"
                                  + (f", e.g. {violations[0]}" if violations else ""))


def test_criterion_10_conjugacy(report):
    res = conjugacy_residual(sample_count=1000)
    worst = max(res.values())
    assert report(worst <= 1e-6, ", ".join(f"{k} {v:.1e}" for k, v in res.items()))
