"""Command-line front end: ``mslab {models,analyze,build,verify,render,charspace}``."""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .charspace import SHORT, has_connected_charspace, is_valid_sigma, summarize
from .errors import MSLabError
from .families import FAMILIES, FAMILY_MIN, build
from .fixtures import GOLDEN, golden

FAMILY_MAX = 8
CONTROLS = (("psi1", "psi1"), ("F1", "F1_torus"), ("north_south", "north_south"))
SURFACE_WORDS = {"torus": "torus", "klein_bottle": "Klein bottle"}


class UsageError(Exception):
    pass


def _fmt_type(t):
    return ",".join(f"{x:+d}" for x in t)


def _sigma_label(orbits):
    return "∅" if not orbits else "{" + ", ".join(sorted(orbits)) + "}"


def _parse_range(text, family):
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi) if sep else int(lo)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected A..B") from None
    if a > b or a < FAMILY_MIN[family] or b > FAMILY_MAX:
        raise UsageError(f"range for {family} must lie in {FAMILY_MIN[family]}..{FAMILY_MAX}")
    return a, b


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_models(args):
    from .models import model_catalog

    for m in model_catalog():
        print(f"{m['name']:<12} {m['surface']:<7} {m['evaluation']:<12} {m['description']}")
    return 0


def cmd_analyze(args):
    from .analysis import analyze
    from .models import get_model

    model = get_model(args.model)
    an = analyze(model, max_period=args.max_period, grid_n=args.grid_n)
    d = an.descriptor
    pts = d.meta["points"]
    print(f"model {model.name} on the {model.surface.kind}")
    print(f"{'orbit':<8} {'kind':<7} {'period':>6}  {'type':<6} point coordinates, |eigenvalues| of f^period, margin")
    for o in d.orbits:
        for k, p in enumerate(o.points):
            info = pts[p]
            coords = ", ".join(f"{c:.6f}" for c in info["coords"])
            mods = ", ".join(f"{abs(e):.4f}" for e in info["eigenvalues"])
            head = f"{o.id:<8} {o.kind:<7} {o.period:>6}  {_fmt_type(o.orientation_type):<6}" if k == 0 else " " * 31
            print(f"{head} {p} ({coords})  |lambda| {mods}  margin {info['margin']:.3g}")
    n0, n1, n2 = d.counts()
    print(f"points: {n0} sinks, {n1} saddles, {n2} sources")
    edges = sorted(d.smale_order)
    print("Smale order: " + (", ".join(f"{a} > {b}" for a, b in edges) if edges else "empty (gradient-like)"))
    if args.emit:
        io.write(d, args.emit)
        print(f"descriptor written to {args.emit}")
    return 0


def cmd_build(args):
    if args.golden:
        if args.golden not in GOLDEN:
            raise UsageError(f"unknown golden descriptor {args.golden!r}")
        d = golden(args.golden)
    else:
        if args.family is None or args.n is None:
            raise UsageError("build needs --family and --n, or --golden")
        d = build(args.family, args.n)
    io.write(d, args.emit)
    n0, n1, n2 = d.counts()
    print(f"{d.name}: {n0} sinks, {n1} saddles, {n2} sources -> {args.emit}")
    return 0


def _control_line(name, d):
    ok, cert = has_connected_charspace(d)
    if ok:
        row = next(s for sig, s in cert.rows if sig == cert.witness)
        kind = SURFACE_WORDS[row.components[0].surface_type]
        text = f"connected: yes (Σ={_sigma_label(cert.witness.orbits)}, {kind})"
    else:
        text = "connected: no"
    return ok, f"positive control {name}: {text}  [{'PASS' if ok else 'FAIL'}]", cert


def cmd_verify(args):
    a, b = _parse_range(args.range, args.family)
    results, all_ok = [], True
    for n in range(a, b + 1):
        d = build(args.family, n)
        connected, cert = has_connected_charspace(d)
        ok = not connected
        all_ok &= ok
        counts = [s.count for _, s in cert.rows]
        print(f"== {args.family} n={n} ({d.name}): {len(cert.rows)} valid Σ, "
              f"component counts {min(counts)}..{max(counts)}, connected: {'yes' if connected else 'no'}  "
              f"[{'PASS' if ok else 'FAIL'}]")
        print(cert.table())
        results.append({"n": n, "expected_connected": False, "pass": ok, **cert.as_dict()})
    controls = []
    for name, key in CONTROLS:
        ok, line, cert = _control_line(name, golden(key))
        all_ok &= ok
        print(line)
        controls.append({"name": name, "expected_connected": True, "pass": ok, **cert.as_dict()})
    print("verify: " + ("PASS" if all_ok else "FAIL"))
    path = args.certificate or f"verify-{args.family}-{a}-{b}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"family": args.family, "range": [a, b], "pass": all_ok,
                   "results": results, "controls": controls}, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    print(f"certificate written to {path}")
    return 0 if all_ok else 1


def cmd_render(args):
    from .render import RenderSpec, render

    try:
        spec = RenderSpec(args.model, args.out, args.size, args.density, not args.no_emphasis)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    glyphs = render(spec)
    print(f"{args.model}: {glyphs} periodic points drawn -> {args.out}")
    return 0


def cmd_charspace(args):
    d = io.read(args.descriptor)
    if args.sigma is None:
        _, cert = has_connected_charspace(d)
        print(cert.table())
        print(f"connected characteristic space: {'yes, Σ=' + _sigma_label(cert.witness.orbits) if cert.witness else 'no'}")
        return 0
    sigma = frozenset(x.strip() for x in args.sigma.split(",") if x.strip())
    unknown = sigma - {o.id for o in d.saddle_orbits()}
    if unknown:
        raise UsageError(f"not saddle orbits of {d.name}: {', '.join(sorted(unknown))}")
    if not is_valid_sigma(d, sigma):
        raise UsageError(f"invalid Σ {_sigma_label(sigma)}: not closed under the Smale order")
    s = summarize(d, sigma)
    parts = ", ".join(f"{SURFACE_WORDS[c.surface_type]} x{c.multiplicity}" for c in s.components)
    print(f"Σ={_sigma_label(sigma)}: {s.count} component(s) ({s.describe()}; {parts}) via {s.method}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def make_parser():
    p = argparse.ArgumentParser(prog="mslab", description=__doc__.split(":")[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("models", help="list the model maps").set_defaults(func=cmd_models)

    a = sub.add_parser("analyze", help="extract the descriptor of a model numerically")
    a.add_argument("model")
    a.add_argument("--max-period", type=int, default=2)
    a.add_argument("--grid-n", type=int, default=48)
    a.add_argument("--emit", metavar="PATH", help="write the descriptor (msd-1)")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("build", help="write a family or golden descriptor")
    b.add_argument("--family", choices=FAMILIES)
    b.add_argument("--n", type=int)
    b.add_argument("--golden", metavar="NAME")
    b.add_argument("--emit", metavar="PATH", required=True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a family has no connected characteristic space")
    v.add_argument("--family", choices=FAMILIES, required=True)
    v.add_argument("--range", required=True, metavar="A..B")
    v.add_argument("--certificate", metavar="PATH", help="JSON certificate (default verify-<family>-<A>-<B>.json)")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw an SVG phase portrait")
    r.add_argument("model")
    r.add_argument("--out", required=True, metavar="PATH")
    r.add_argument("--size", type=int, default=512)
    r.add_argument("--density", type=int, default=16)
    r.add_argument("--no-emphasis", action="store_true", help="thin separatrix strokes")
    r.set_defaults(func=cmd_render)

    c = sub.add_parser("charspace", help="characteristic spaces of a descriptor file")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--sigma", metavar="IDS", help="comma-separated saddle orbit ids ('' for the empty set)")
    g.add_argument("--all", action="store_true", help="every valid Σ (default)")
    c.add_argument("descriptor")
    c.set_defaults(func=cmd_charspace)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyError as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"mslab: error: {msg}", file=sys.stderr)
    except (UsageError, MSLabError, OSError, ValueError) as exc:
        print(f"mslab: error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
