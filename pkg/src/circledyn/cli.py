"""Command-line interface.

Subcommands: rotnum, build-group, orbit, probe-transitive, probe-wandering,
fixed-points, check-equiv, euler-cocycle, conjugacy-verdict.

Exit codes: 0 success, 2 validation error, 3 certified dynamical refutation
(a wandering probe returning REFUTES), so scripts can branch on probe
outcomes.  Output is deterministic for fixed inputs: floats are printed
with 17 significant digits and files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .circle import CircleHomeo, project, sine_lift
from .errors import CircledynError, RationalRotationError
from .expr import (Affine, HomeoExpr, Identity, Translate, evaluate,
                   expr_from_jsonable, expr_to_jsonable)
from .groups import (CircleZnAction, ConjugacyWitness, ZnAction,
                     build_circle_action, build_line_action, conjugacy_verdict)
from .probes import (ProbeVerdict, fixed_points, orbit, transitivity_probe,
                     wandering_probe)
from .quadirr import (Gl2zMatrix, QuadIrrational, gl2z_equivalent,
                      parse_quad_irrational)
from .rotnum import rational_screen, rotation_number


# -- deterministic output helpers --------------------------------------------

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite float {x!r} in output")
    return format(x, ".17g")


def emit_json(obj, indent: int = 0) -> str:
    """JSON with floats at fixed 17-significant-digit formatting."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{pad}  {json.dumps(str(k))}: {emit_json(v, indent + 1)}'
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{pad}  {emit_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".circledyn-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _deliver(text: str, output: str | None):
    if output:
        _atomic_write(output, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _svg_scatter(points, window) -> str:
    width, height = 800, 160
    a, b = window
    rows = ['<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
            f'<line x1="40" y1="{height - 40}" x2="{width - 20}" '
            f'y2="{height - 40}" stroke="black"/>']
    span = b - a
    for x in points:
        if not a <= x <= b:
            continue
        px = 40 + (x - a) / span * (width - 60)
        rows.append(f'<circle cx="{px:.3f}" cy="{height - 40}" r="2" '
                    'fill="steelblue" fill-opacity="0.6"/>')
    rows.append(f'<text x="40" y="{height - 16}" font-size="12">{_fmt_float(a)}</text>')
    rows.append(f'<text x="{width - 80}" y="{height - 16}" '
                f'font-size="12">{_fmt_float(b)}</text>')
    rows.append("</svg>")
    return "\n".join(rows) + "\n"


# -- input parsing ------------------------------------------------------------

def parse_map_spec(spec: str) -> HomeoExpr:
    """Lift grammar: identity | translate:a | affine:a,b | sine:t,amp |
    file:path (serialized expression tree)."""
    if spec == "identity":
        return Identity()
    if ":" not in spec:
        raise ValueError(f"bad map spec {spec!r}")
    head, _, rest = spec.partition(":")
    if head == "translate":
        return Translate(float(rest))
    if head == "affine":
        a, b = (float(v) for v in rest.split(","))
        return Affine(a, b)
    if head == "sine":
        t, amp = (float(v) for v in rest.split(","))
        return sine_lift(t, amp)
    if head == "file":
        with open(rest) as handle:
            return expr_from_jsonable(json.load(handle))
    raise ValueError(f"unknown map spec kind {head!r}")


def _alpha_jsonable(alpha: QuadIrrational | None):
    return alpha.as_jsonable() if alpha is not None else None


def _alpha_from_jsonable(doc) -> QuadIrrational | None:
    if doc is None:
        return None
    return QuadIrrational(doc["p"], doc["q"], doc["d"], doc["r"])


def action_to_bundle(action) -> dict:
    if isinstance(action, CircleZnAction):
        return {"space": "circle", "n": action.n, "k": action.k,
                "alpha": _alpha_jsonable(action.alpha),
                "g_word": list(action.g_word),
                "marked_angles": list(action.marked_angles),
                "generators": [expr_to_jsonable(g.lift)
                               for g in action.generators]}
    return {"space": "line", "n": action.n,
            "alpha": _alpha_jsonable(action.alpha),
            "generators": [expr_to_jsonable(g) for g in action.generators]}


def action_from_bundle(doc: dict):
    space = doc.get("space", "line")
    alpha = _alpha_from_jsonable(doc.get("alpha"))
    if space == "circle":
        if alpha is None:
            raise ValueError("circle bundles need exact alpha data")
        return build_circle_action(alpha, doc["n"], doc["k"], doc["g_word"])
    if "generators" in doc:
        gens = tuple(expr_from_jsonable(g) for g in doc["generators"])
        return ZnAction(n=doc["n"], generators=gens, alpha=alpha)
    if alpha is None:
        raise ValueError("line bundles need either generators or alpha")
    return build_line_action(alpha, doc["n"])


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


# -- subcommand handlers ------------------------------------------------------

def _cmd_rotnum(args) -> int:
    lift = parse_map_spec(args.lift)
    f = project(lift)
    est = rotation_number(f, args.N, args.x0)
    hit = rational_screen(est.value, est.error_bound, args.q_max)
    doc = est.as_jsonable()
    doc["rational_screen"] = None if hit is None else {"p": hit[0], "q": hit[1]}
    _deliver(emit_json(doc), args.output)
    return 0


def _cmd_build_group(args) -> int:
    alpha = parse_quad_irrational(args.alpha)
    if args.circle:
        if args.g is None:
            raise ValueError("--circle needs --g")
        g_word = tuple(int(v) for v in args.g.split(","))
        action = build_circle_action(alpha, args.n, args.k, g_word)
    else:
        action = build_line_action(alpha, args.n)
    _deliver(emit_json(action_to_bundle(action)), args.output)
    return 0


def _cmd_orbit(args) -> int:
    action = action_from_bundle(_load_json(args.group))
    sample = orbit(action, args.x0, args.radius)
    if args.format == "csv":
        text = "\n".join(_fmt_float(p) for p in sample.points) + "\n"
    elif args.format == "svg":
        window = _parse_window(args.window) if args.window else (
            (0.0, 1.0) if getattr(action, "space", "line") == "circle"
            else (min(sample.points), max(sample.points)))
        text = _svg_scatter(sample.points, window)
    else:
        text = emit_json({"base_point": sample.base_point,
                          "radius": sample.radius,
                          "points": list(sample.points)})
    _deliver(text, args.output)
    return 0


def _parse_window(text: str) -> tuple[float, float]:
    a, b = (float(v) for v in text.split(","))
    return a, b


def _cmd_probe_transitive(args) -> int:
    action = action_from_bundle(_load_json(args.group))
    window = _parse_window(args.window)
    report = transitivity_probe(action, args.x0, args.eps, args.radius, window)
    _deliver(emit_json(report.as_jsonable()), args.output)
    return 0


def _cmd_probe_wandering(args) -> int:
    action = action_from_bundle(_load_json(args.group))
    interval = _parse_window(args.interval)
    report = wandering_probe(action, interval, args.radius, args.tol)
    _deliver(emit_json(report.as_jsonable()), args.output)
    return 3 if report.verdict is ProbeVerdict.REFUTES else 0


def _cmd_fixed_points(args) -> int:
    f = project(parse_map_spec(args.lift))
    angles = fixed_points(f, args.tol)
    _deliver(emit_json({"fixed_angles": angles, "tol": args.tol}), args.output)
    return 0


def _cmd_check_equiv(args) -> int:
    x = parse_quad_irrational(args.x)
    y = parse_quad_irrational(args.y)
    equivalent, witness = gl2z_equivalent(x, y)
    doc = {"equivalent": equivalent,
           "witness": list(witness.as_tuple()) if witness else None}
    _deliver(emit_json(doc), args.output)
    return 0


def _cmd_euler_cocycle(args) -> int:
    from .euler import euler_cocycle_table
    from .probes import _check_budget, _word_ball
    from .groups import word_to_homeo

    action = action_from_bundle(_load_json(args.action))
    if getattr(action, "space", "line") != "circle":
        raise ValueError("the Euler cocycle needs a circle action bundle")
    rank = len(action.generators)
    _check_budget(rank, args.ball)
    elements = []
    for word in _word_ball(rank, args.ball):
        elements.append((word, CircleHomeo(word_to_homeo(action, word))))
    table = euler_cocycle_table(elements)
    _deliver(emit_json(table.as_jsonable()), args.output)
    return 0


def _cmd_conjugacy_verdict(args) -> int:
    a = action_from_bundle(_load_json(args.a))
    b = action_from_bundle(_load_json(args.b))
    witness = None
    if args.witness:
        doc = _load_json(args.witness)
        witness = ConjugacyWitness(
            phi=expr_from_jsonable(doc["phi"]),
            h_word=tuple(int(v) for v in doc["h_word"]),
            psi=(expr_from_jsonable(doc["psi"])
                 if doc.get("psi") is not None else Identity()))
    report = conjugacy_verdict(a, b, witness, tol=args.tol)
    _deliver(emit_json(report.as_jsonable()), args.output)
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circledyn",
        description="Group actions on the line and the circle: rotation "
                    "numbers, Euler cocycles, equivalence of irrationals, "
                    "and dynamics probes.")
    parser.add_argument("--config", help="JSON file supplying values for "
                                         "omitted flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rotnum", help="estimate a rotation number")
    p.add_argument("--lift", required=True,
                   help="map spec: identity | translate:a | affine:a,b | "
                        "sine:t,amp | file:expr.json")
    p.add_argument("--N", type=int, default=10000)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--q-max", dest="q_max", type=int, default=1000)
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_rotnum)

    p = sub.add_parser("build-group", help="build a line or circle action")
    p.add_argument("--alpha", required=True,
                   help='quadratic irrational, e.g. "sqrt(2)-1" or '
                        '"(0+1*sqrt(2))/1 - 1" or "golden - 1"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--circle", action="store_true")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--g", help="comma-separated word for g, length n")
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_build_group)

    p = sub.add_parser("orbit", help="enumerate an orbit sample")
    p.add_argument("--group", required=True, help="action bundle JSON path")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    p.add_argument("--window", help="a,b (svg axis range)")
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_orbit)

    p = sub.add_parser("probe-transitive", help="orbit density coverage probe")
    p.add_argument("--group", required=True)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=0.02)
    p.add_argument("--radius", type=int, default=50)
    p.add_argument("--window", default="0,1")
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_probe_transitive)

    p = sub.add_parser("probe-wandering", help="wandering interval probe")
    p.add_argument("--group", required=True)
    p.add_argument("--interval", required=True, help="a,b")
    p.add_argument("--radius", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_probe_wandering)

    p = sub.add_parser("fixed-points", help="fixed angles of a circle map")
    p.add_argument("--lift", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_fixed_points)

    p = sub.add_parser("check-equiv", help="GL(2,Z) equivalence of irrationals")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_check_equiv)

    p = sub.add_parser("euler-cocycle", help="tabulate the Euler cocycle "
                                             "over a word ball")
    p.add_argument("--action", required=True, help="circle action bundle")
    p.add_argument("--ball", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(handler=_cmd_euler_cocycle)

    p = sub.add_parser("conjugacy-verdict", help="decidable conjugacy criteria")
    p.add_argument("--a", required=True, help="first circle action bundle")
    p.add_argument("--b", required=True, help="second circle action bundle")
    p.add_argument("--witness", help="witness JSON: {phi, h_word, psi?}")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_conjugacy_verdict, output=None)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv, args):
    if not args.config:
        return args
    with open(args.config) as handle:
        overrides = json.load(handle)
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_")
                for a in argv if a.startswith("--")}
    for key, value in overrides.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in explicit:
            setattr(args, attr, value)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config(parser, argv, args)
    try:
        return args.handler(args)
    except RationalRotationError as exc:
        print(f"circledyn: {exc}", file=sys.stderr)
        return 3
    except (CircledynError, ValueError, OSError, KeyError) as exc:
        print(f"circledyn: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
