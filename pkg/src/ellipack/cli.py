"""Command-line front end.

Exit status: 0 when a result was computed (including "infeasible"), 1 when
``reproduce`` finds a mismatch, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .arith import format_number, parse_number
from .ehcap import eh_dominates, eh_sequence, obstruction_report
from .engine import (
    DEFAULT_DEGREE_BOUND,
    EllipsoidPair,
    ball_capacity,
    decide,
    fill_table,
    lambda_sup,
)
from .homology import HClass, exceptional_classes, exceptional_orbits, in_cone
from .reproduce import TARGETS, reproduce
from .svg import render_svg
from .toric import (
    blowup_chain,
    decompose_complement,
    decompose_ellipsoid,
    pack_unit_triangles,
)
from .weights import inner_vector, weight_summary

SCHEMA = "ellipack/1"


class UsageError(Exception):
    pass


def _fmt(x):
    if isinstance(x, (list, tuple)):
        return [_fmt(y) for y in x]
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, HClass):
        return x.to_line()
    if isinstance(x, int):
        return x
    return format_number(x)


def _pair_args(tokens: list[str], count: int) -> list:
    vals = [t for t in tokens if t != "into"]
    if len(vals) != count:
        raise UsageError(f"expected {count} numbers, got {len(vals)}")
    return [parse_number(v) for v in vals]


def _int_pair(tokens: list[str]) -> tuple[int, int]:
    """Accept "m n" or "m/n"; the slash form keeps the pair exactly as written."""
    if len(tokens) == 1 and "/" in tokens[0]:
        a, _, b = tokens[0].partition("/")
        vals = [a, b]
    else:
        vals = tokens
    if len(vals) != 2:
        raise UsageError("expected a pair m n (or m/n)")
    try:
        return int(vals[0]), int(vals[1])
    except ValueError as exc:
        raise UsageError(f"expected integers, got {' '.join(vals)}") from exc


def _verdict_dict(v) -> dict:
    return {"status": v.status, "feasible": v.feasible, "certificate": _fmt(v.certificate),
            "pairing": _fmt(v.pairing), "degree_bound": v.degree_bound,
            "method": v.method, "detail": v.describe()}


def _sup_dict(res) -> dict:
    return {"exact": res.exact, "value": _fmt(res.value), "lower": _fmt(res.lower),
            "upper": _fmt(res.upper), "binding": _fmt(res.binding),
            "degree_bound": res.degree_bound, "method": res.method}


# --- verbs -----------------------------------------------------------------------
# each returns (payload dict, human text, exit code)

def cmd_decide(a):
    m, n, mt, nt = _pair_args(a.numbers, 4)
    pair = EllipsoidPair.make((m, n), (mt, nt), a.lam)
    v = decide(pair, a.degree_bound, a.exact_reduction, a.cache_dir)
    return _verdict_dict(v), v.describe(), 0


def cmd_sup(a):
    m, n, mt, nt = _pair_args(a.numbers, 4)
    res = lambda_sup((m, n), (mt, nt), a.degree_bound, a.exact_reduction, a.cache_dir)
    text = res.describe()
    return _sup_dict(res), text, 0


def cmd_fill_table(a):
    table = fill_table()
    head = "k    " + " ".join(f"{k:>8}" for k in table)
    row = "v(k) " + " ".join(f"{format_number(v):>8}" for v in table.values())
    return {"table": {str(k): _fmt(v) for k, v in table.items()}}, head + "\n" + row, 0


def cmd_capacity(a):
    m, n = _pair_args(a.numbers, 2)
    cap = ball_capacity(m, n, a.degree_bound, a.exact_reduction, a.cache_dir)
    if isinstance(cap, tuple):
        return {"exact": False, "interval": _fmt(list(cap))}, \
            f"[{_fmt(cap[0])}, {_fmt(cap[1])}]", 0
    return {"exact": True, "value": _fmt(cap)}, format_number(cap), 0


def cmd_weights(a):
    m, n = _int_pair(a.pair)
    labels, cf = weight_summary(m, n)
    text = " ".join(map(str, labels)) + " | cf multiplicities: " + " ".join(map(str, cf))
    return {"pair": [m, n], "labels": list(labels), "multiplicities": cf}, text, 0


def cmd_inner(a):
    m, n = _int_pair(a.pair)
    v = inner_vector(min(m, n), max(m, n))
    text = f"{v.degree}; " + " ".join(map(str, v.labels))
    return {"pair": list(v.pair), "degree": v.degree, "labels": list(v.labels),
            "sorted": list(v.sorted_labels)}, text, 0


def cmd_chain(a):
    m, n = _int_pair(a.pair)
    chain = blowup_chain(m, n)
    payload = {"pair": [m, n], "edges": [
        {"index": e.index, "conormal": list(e.conormal), "support": _fmt(e.support),
         "from": _fmt(list(e.start)), "to": _fmt(list(e.end)), "class": str(e.hclass)}
        for e in chain.edges]}
    _maybe_svg(a, chain)
    return payload, chain.dump(), 0


def _decomposition(kind, m, n):
    if kind == "complement":
        return decompose_complement(m, n)
    return decompose_ellipsoid(m, n)


def _tri_payload(tris):
    return [{"size": _fmt(t.size), "vertices": _fmt([list(p) for p in t.vertices])} for t in tris]


def cmd_decompose(a):
    m, n = _int_pair(a.pair)
    tris = _decomposition(a.kind, m, n)
    _maybe_svg(a, tris)
    text = "\n".join(f"size={format_number(t.size)} vertices=" +
                     " ".join(f"({format_number(x)},{format_number(y)})" for x, y in t.vertices)
                     for t in tris)
    return {"pair": [m, n], "kind": a.kind, "triangles": _tri_payload(tris)}, text, 0


def cmd_pack(a):
    maps = pack_unit_triangles(a.k)
    _maybe_svg(a, maps)
    rows = [{"matrix": [list(r) for r in f.matrix], "translation": list(f.translation)} for f in maps]
    text = "\n".join(f"A{i}: M={f.matrix} t={f.translation}" for i, f in enumerate(maps, 1))
    return {"k": a.k, "maps": rows}, text, 0


def cmd_ehcap(a):
    m, n = _pair_args(a.numbers, 2)
    depth = a.depth or 20
    seq = eh_sequence(m, n, depth)
    return {"pair": _fmt([m, n]), "depth": depth, "terms": _fmt(list(seq))}, \
        " ".join(format_number(x) for x in seq), 0


def cmd_ehcmp(a):
    m, n, mt, nt = _pair_args(a.numbers, 4)
    depth = a.depth or 4 * int(max(m, n, 1)) * int(max(mt, nt, 1))
    dom = eh_dominates(m, n, mt, nt, depth)
    return {"dominated": dom.holds, "depth": depth, "first_failure": dom.first_failure}, \
        dom.describe(), 0


def cmd_report(a):
    m, n, mt, nt = _pair_args(a.numbers, 4)
    pair = EllipsoidPair.make((m, n), (mt, nt), a.lam)
    rep = obstruction_report(pair, a.depth, a.degree_bound,
                             exact_reduction=a.exact_reduction, cache_dir=a.cache_dir)
    d = rep.as_dict()
    text = "\n".join(f"{k:>14}: {v}" for k, v in d.items())
    return d, text, 0


def cmd_cone_check(a):
    try:
        cls = HClass.parse(a.hclass)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    v = in_cone(cls, a.degree_bound, a.exact_reduction, a.cache_dir)
    return _verdict_dict(v), v.describe(), 0


def cmd_enumerate(a):
    if a.orbits:
        classes = exceptional_orbits(a.k, a.degree_bound, cache_dir=a.cache_dir)
    else:
        classes = exceptional_classes(a.k, a.degree_bound, cache_dir=a.cache_dir)
    lines = [c.to_line() for c in classes]
    return {"k": a.k, "degree_bound": a.degree_bound, "count": len(lines), "classes": lines}, \
        "\n".join(lines + [f"# {len(lines)} classes"]), 0


def cmd_render(a):
    if a.what == "pack":
        if len(a.args) != 1:
            raise UsageError("render pack K")
        obj = pack_unit_triangles(int(a.args[0]))
    else:
        m, n = _int_pair(a.args)
        obj = blowup_chain(m, n) if a.what == "chain" else _decomposition(a.what, m, n)
    svg = render_svg(obj, title=f"{a.what} {' '.join(a.args)}")
    if a.svg:
        Path(a.svg).write_text(svg)
        return {"svg": a.svg}, f"wrote {a.svg}", 0
    return {"svg": svg}, svg.rstrip("\n"), 0


def cmd_reproduce(a):
    try:
        rep = reproduce(a.target)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    return rep.as_dict(), "\n".join(rep.lines()), 0 if rep.ok else 1


def _maybe_svg(a, obj):
    if getattr(a, "svg", None):
        Path(a.svg).write_text(render_svg(obj))


# --- parser ------------------------------------------------------------------------

def _rational_arg(text: str):
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND, metavar="D")
    common.add_argument("--exact-reduction", action="store_true",
                        help="trust Cremona reduction as an exact decision (k >= 9)")
    common.add_argument("--cache-dir", default=None, metavar="PATH",
                        help="exceptional-class cache (default: $ELLIPACK_CACHE)")
    common.add_argument("--depth", type=int, default=None, metavar="T")
    common.add_argument("--svg", default=None, metavar="PATH")
    common.add_argument("--lambda", dest="lam", type=_rational_arg, default=Fraction(1),
                        metavar="p/q")

    p = argparse.ArgumentParser(prog="ellipack", description="Exact ellipsoid embedding toolkit.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    verb("decide", cmd_decide, "does lambda*E(m,n) embed in open E(m',n')?") \
        .add_argument("numbers", nargs="+", help="m n [into] m' n'")
    verb("sup", cmd_sup, "supremal lambda").add_argument("numbers", nargs="+")
    verb("fill-table", cmd_fill_table, "packing constants v(1..8)")
    verb("capacity", cmd_capacity, "ball capacity of E(m,n)").add_argument("numbers", nargs=2)
    verb("weights", cmd_weights, "outer weight expansion").add_argument("pair", nargs="+")
    verb("inner", cmd_inner, "inner vector V_{m,n}").add_argument("pair", nargs="+")
    verb("chain", cmd_chain, "singular blow-up chain").add_argument("pair", nargs="+")
    sp = verb("decompose", cmd_decompose, "triangle decomposition")
    sp.add_argument("pair", nargs="+")
    sp.add_argument("--kind", choices=("complement", "ellipsoid"), default="complement")
    verb("pack-triangles", cmd_pack, "unit triangle packing of E(1,k)").add_argument("k", type=int)
    verb("ehcap", cmd_ehcap, "Ekeland-Hofer sequence").add_argument("numbers", nargs=2)
    verb("ehcmp", cmd_ehcmp, "termwise EH domination").add_argument("numbers", nargs="+")
    verb("report", cmd_report, "volume / EH / cone side by side").add_argument("numbers", nargs="+")
    verb("cone-check", cmd_cone_check, "cone membership of a class 'd;m1,...'") \
        .add_argument("hclass")
    sp = verb("enumerate", cmd_enumerate, "exceptional classes")
    sp.add_argument("k", type=int)
    sp.add_argument("--orbits", action="store_true", help="one sorted representative per orbit")
    sp = verb("render", cmd_render, "SVG drawing")
    sp.add_argument("what", choices=("chain", "complement", "ellipsoid", "pack"))
    sp.add_argument("args", nargs="+")
    verb("reproduce", cmd_reproduce, "check a named target").add_argument(
        "target", choices=sorted(TARGETS))
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, text, code = args.fn(args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"ellipack {args.verb}: error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        doc = {"schema": SCHEMA, "command": args.verb}
        doc.update(payload)
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(text, file=out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
