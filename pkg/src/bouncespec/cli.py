"""Command line front end.

Every subcommand prints deterministic text (or JSON with --json).  Exit
status: 0 on success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .flow import trace
from .geometry import EPS_GEOM, GeometryError, LabeledPolygon
from .language import LanguageTable, enumerate_language
from .perturbation import demonstrate_impossibility
from .reconstruction import (OracleError, PolygonOracle, SearchBudgetExceeded,
                             WordListOracle, adjacency_pairs, estimate_angle)
from .sturmian import insertion_strings, square_bounce_word
from .svg import Figure
from .unfolding import corridor, develop, parse_word

# JSON output schemas, one per subcommand
_NUM = {"type": "number"}
_INT = {"type": "integer"}
_STR = {"type": "string"}
_LABELS = {"type": "array", "items": _STR}
_PT = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}


def _obj(cmd, props):
    props = dict(props, command={"const": cmd})
    return {"type": "object", "properties": props, "required": sorted(props),
            "additionalProperties": False}


JSON_SCHEMAS = {
    "trace": _obj("trace", {
        "word": _LABELS, "terminal": {"enum": ["completed", "singular"]}, "bounces": _INT,
        "impacts": {"type": "array", "items": _PT}, "vertex": {"type": ["integer", "null"]}}),
    "develop": _obj("develop", {
        "word": _LABELS, "feasible": {"type": "boolean"}, "width": _NUM,
        "marginal": {"type": "boolean"}, "copies": _INT,
        "witness": {"oneOf": [{"type": "null"}, {
            "type": "object", "properties": {"point": _PT, "angle": _NUM},
            "required": ["angle", "point"], "additionalProperties": False}]},
        "angle_interval": {"oneOf": [{"type": "null"}, _PT]}}),
    "language": _obj("language", {
        "max_len": _INT, "count": _INT, "words": {"type": "array", "items": _STR},
        "marginal": {"type": "array", "items": _STR}}),
    "sturmian": _obj("sturmian", {
        "p": _INT, "q": _INT, "code": _STR, "insertions": {"type": "array", "items": _STR},
        "insertion_lengths": {"type": "array", "items": _INT}}),
    "angle": _obj("angle", {
        "pair": _LABELS, "kind": {"enum": ["exact_rational", "estimate"]}, "p": _INT, "q": _INT,
        "value": _NUM, "num_sequences": _INT, "total_insertion": _INT, "depth": _INT,
        "notes": _STR}),
    "adjacency": _obj("adjacency", {
        "pairs": {"type": "array", "items": _LABELS},
        "cyclic_order": {"oneOf": [{"type": "null"}, _LABELS]},
        "depth": _INT, "convex": {"type": "boolean"}}),
    "perturb": _obj("perturb", {
        "words": _INT, "epsilon": _NUM, "sampled_epsilon": _NUM, "delta": _NUM, "L": _NUM,
        "binding": _STR, "capped": {"type": "boolean"}, "count": _INT, "seed": _INT,
        "persistence": _NUM, "passed": {"type": "boolean"},
        "failures": {"type": "array", "items": {"type": "array"}},
        "distinct_pair": {"oneOf": [{"type": "null"}, {"type": "array", "items": _NUM}]}}),
}


def _point(s):
    try:
        x, y = (float(t) for t in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected X,Y")
    return (x, y)


def _pair(s):
    parts = [t.strip() for t in s.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected A,B")
    return tuple(parts)


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _globals(suppress):
    # subcommands repeat the global flags without defaults, so a value given
    # before the subcommand name is not overwritten
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--tolerance", type=float, default=d(EPS_GEOM),
                   help="geometric tolerance relative to the table diameter")
    g.add_argument("--seed", type=int, default=d(0))
    g.add_argument("--quiet", action="store_true", default=d(False), help="print results only")
    g.add_argument("--json", action="store_true", default=d(False),
                   help="machine readable output")
    return g


def build_parser():
    common = _globals(True)
    ap = argparse.ArgumentParser(prog="bouncespec", parents=[_globals(False)],
                                 description="Bounce words of polygonal billiard tables.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", parents=[common], help="follow a trajectory")
    p.add_argument("--table", required=True)
    p.add_argument("--point", type=_point, required=True)
    p.add_argument("--angle", type=float, required=True)
    p.add_argument("--bounces", type=_nonneg_int, required=True)
    p.add_argument("--svg")

    p = sub.add_parser("develop", parents=[common], help="development and corridor of a word")
    p.add_argument("--table", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--svg")

    p = sub.add_parser("language", parents=[common], help="enumerate the bounce language")
    p.add_argument("--table", required=True)
    p.add_argument("--max-len", type=_positive_int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("sturmian", parents=[common], help="square bounce code of slope p/q")
    p.add_argument("--p", type=_positive_int, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--insertions", action="store_true")

    for name, helptext in (("angle", "angle at a corner from membership queries"),
                           ("adjacency", "adjacent edge pairs from membership queries")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--table")
        src.add_argument("--oracle-from", metavar="WORDS")
        p.add_argument("--depth", type=_positive_int, required=True)
        if name == "angle":
            p.add_argument("--pair", type=_pair, required=True)

    p = sub.add_parser("perturb", parents=[common], help="certified persistence radius")
    p.add_argument("--table", required=True)
    p.add_argument("--words", required=True, help="words file, one comma separated word per line")
    p.add_argument("--count", type=_positive_int, default=200)
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiply the sampled radius (diagnostic, above 1 leaves the certificate)")
    p.add_argument("--svg")
    return ap


# -- formatting ----------------------------------------------------------------

def _f(x):
    s = "%.12f" % x
    return s[1:] if s.startswith("-") and not float(s) else s


def _pi_multiple(p, q):
    num = "pi" if p == 1 else "%dpi" % p
    return num if q == 1 else "%s/%d" % (num, q)


def _wstr(w):
    return ",".join(w) or "-"


def _emit(args, out, lines, data):
    if args.json:
        out.write(json.dumps(dict(data, command=args.command), sort_keys=True) + "\n")
    else:
        for ln in lines:
            out.write(ln + "\n")


def _load_table(path):
    try:
        return LabeledPolygon.load(path)
    except OSError as e:
        raise GeometryError("cannot read table %s: %s" % (path, e.strerror))


# -- subcommands -----------------------------------------------------------------

def cmd_trace(args, out):
    poly = _load_table(args.table)
    res = trace(poly, args.point, args.angle, args.bounces,
                eps_vertex=args.tolerance * poly.diameter())
    lines = [] if args.quiet else ["bounces: %d" % res.bounces, "terminal: %s" % res.terminal]
    lines.append(_wstr(res.word))
    if not args.quiet:
        lines += ["%s %s %s" % (lab, _f(q[0]), _f(q[1])) for lab, q in zip(res.word, res.impact_points)]
        if res.vertex is not None:
            lines.append("halted at vertex %d" % res.vertex)
    if args.svg:
        fig = Figure()
        fig.polygon(poly.vertices)
        fig.polyline([args.point] + list(res.impact_points), stroke="crimson")
        fig.dot(args.point, "crimson")
        fig.save(args.svg)
    _emit(args, out, lines, {
        "word": list(res.word), "terminal": res.terminal, "bounces": res.bounces,
        "impacts": [list(q) for q in res.impact_points], "vertex": res.vertex})
    return 0


def cmd_develop(args, out):
    poly = _load_table(args.table)
    w = parse_word(poly, args.word)
    dev = develop(poly, w)
    c = corridor(dev, args.tolerance)
    lines = ["%s %s" % (_wstr(w), "feasible" if c.feasible else "infeasible")]
    if not args.quiet:
        lines.append("copies: %d" % len(dev.copies))
        if c.feasible:
            (x, y), th = c.witness
            lo, hi = c.angle_interval
            lines += ["width: %s" % _f(c.width),
                      "witness: %s %s angle %s" % (_f(x), _f(y), _f(th)),
                      "directions: [%s, %s]" % (_f(lo), _f(hi))]
            if c.marginal:
                lines.append("numerically marginal")
    if args.svg:
        fig = Figure()
        for j in range(len(dev.copies)):
            fig.polygon(dev.copy_vertices(j), stroke="gray", width=1.0)
        for port in dev.portals:
            fig.polyline([port.left, port.right], stroke="royalblue", width=3.0)
        if c.feasible:
            # the witness line across the whole development
            (x, y), th = c.witness
            R = 2.0 * poly.diameter() * (len(w) + 1)
            dx, dy = math.cos(th), math.sin(th)
            pts = [p for j in range(len(dev.copies)) for p in dev.copy_vertices(j)]
            reach = max(math.dist((x, y), p) for p in pts)
            fig.polyline([(x - 0.1 * reach * dx, y - 0.1 * reach * dy),
                          (x + min(R, 1.1 * reach) * dx, y + min(R, 1.1 * reach) * dy)],
                         stroke="crimson")
        fig.save(args.svg)
    wit = None
    if c.feasible:
        wit = {"point": list(c.witness[0]), "angle": c.witness[1]}
    _emit(args, out, lines, {
        "word": list(w), "feasible": c.feasible, "width": c.width if c.feasible else 0.0,
        "marginal": bool(c.marginal), "copies": len(dev.copies), "witness": wit,
        "angle_interval": list(c.angle_interval) if c.feasible else None})
    return 0


def cmd_language(args, out):
    poly = _load_table(args.table)
    table = enumerate_language(poly, args.max_len, args.tolerance)
    text = table.dumps()
    lines = []
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if not args.quiet:
            lines.append("%d words written to %s" % (len(table), args.out))
    else:
        lines = text.splitlines()
    if table.marginal and not args.quiet:
        lines.append("# %d numerically marginal" % len(table.marginal))
    _emit(args, out, lines, {
        "max_len": args.max_len, "count": len(table),
        "words": [_wstr(w) for w in sorted(table.words)],
        "marginal": [_wstr(w) for w in sorted(table.marginal)]})
    return 0


def cmd_sturmian(args, out):
    code = square_bounce_word(args.p, args.q)
    pat = insertion_strings(args.p, args.q)
    lines = [code.word]
    if args.insertions:
        lines += ["%d %d %s" % (i + 1, len(s), s or "-") for i, s in enumerate(pat.strings)]
        if not args.quiet:
            lines.append("total %d" % pat.total)
    _emit(args, out, lines, {"p": args.p, "q": args.q, "code": code.word,
                             "insertions": list(pat.strings),
                             "insertion_lengths": list(pat.lengths)})
    return 0


def _oracle(args):
    if args.oracle_from:
        try:
            return WordListOracle.from_file(args.oracle_from)
        except OSError as e:
            raise OracleError("cannot read %s: %s" % (args.oracle_from, e.strerror))
    return PolygonOracle(_load_table(args.table), eps_geom=args.tolerance)


def cmd_angle(args, out):
    oracle = _oracle(args)
    A, B = args.pair
    for c in (A, B):
        if c not in oracle.alphabet:
            raise OracleError("unknown label %s" % c)
    est = estimate_angle(oracle, A, B, args.depth)
    if est is None:
        raise SearchBudgetExceeded("no matching family found within budget")
    if est.kind == "exact_rational":
        line = "exact_rational %d/%d -> %s = %s rad (certified to depth %d)" % (
            est.p, est.q, _pi_multiple(est.p, est.q), _f(est.value), est.depth)
    else:
        line = "estimate %d/%d*pi = %s rad (depth %d)" % (
            est.num_sequences, est.total_insertion, _f(est.value), est.depth)
    lines = [line] if args.quiet else ["corner %s,%s" % (A, B), line, est.notes]
    _emit(args, out, lines, {
        "pair": [A, B], "kind": est.kind, "p": est.p, "q": est.q, "value": est.value,
        "num_sequences": est.num_sequences, "total_insertion": est.total_insertion,
        "depth": est.depth, "notes": est.notes})
    return 0


def cmd_adjacency(args, out):
    oracle = _oracle(args)
    res = adjacency_pairs(oracle, args.depth)
    pairs = sorted(tuple(sorted(p)) for p in res.pairs)
    lines = ["%s-%s" % p for p in pairs]
    if not args.quiet:
        order = " ".join(res.cyclic_order) if res.cyclic_order else "not closed"
        lines += ["cyclic order: %s" % order, res.certified()]
    _emit(args, out, lines, {
        "pairs": [list(p) for p in pairs], "cyclic_order": res.cyclic_order,
        "depth": res.depth, "convex": res.convex})
    return 0


def cmd_perturb(args, out):
    poly = _load_table(args.table)
    try:
        with open(args.words) as fh:
            words = sorted(LanguageTable.loads(fh.read(), poly.labels).words)
    except OSError as e:
        raise GeometryError("cannot read %s: %s" % (args.words, e.strerror))
    rep = demonstrate_impossibility(poly, words, args.count, args.seed, args.scale)
    cert = rep.certificate
    lines = rep.describe().splitlines()
    if args.quiet:
        lines = lines[-1:]
    if args.svg:
        fig = Figure()
        if rep.distinct_pair:
            i, j, _ = rep.distinct_pair
            fig.polygon(rep.samples[i].vertices, stroke="crimson", width=1.5)
            fig.polygon(rep.samples[j].vertices, stroke="royalblue", width=1.5)
        fig.polygon(poly.vertices, stroke="black", width=1.0, opacity=0.6)
        fig.save(args.svg)
    _emit(args, out, lines, {
        "words": len(cert.words), "epsilon": cert.epsilon, "sampled_epsilon": rep.epsilon,
        "delta": cert.delta, "L": cert.L, "binding": _wstr(cert.binding), "capped": cert.capped,
        "count": rep.count, "seed": rep.seed, "persistence": rep.persistence,
        "passed": rep.passed, "failures": [[i, _wstr(w)] for i, w in rep.failures],
        "distinct_pair": list(rep.distinct_pair) if rep.distinct_pair else None})
    return 0 if rep.passed else 1


COMMANDS = {"trace": cmd_trace, "develop": cmd_develop, "language": cmd_language,
            "sturmian": cmd_sturmian, "angle": cmd_angle, "adjacency": cmd_adjacency,
            "perturb": cmd_perturb}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if not args.tolerance > 0:
        err.write("bouncespec: error: --tolerance must be positive\n")
        return 2
    try:
        return COMMANDS[args.command](args, out)
    except (GeometryError, OracleError, SearchBudgetExceeded, ValueError) as e:
        err.write("bouncespec: %s\n" % e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
