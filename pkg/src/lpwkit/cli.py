"""``lpwkit`` command line.

Every command reads interchange documents (files or ``-`` for stdin; bundles
are expanded) and writes one document to stdout. Diagnostics go to stderr.

Exit codes: 0 ok, 1 verification failed, 2 malformed input or unmet
precondition, 3 oracle budget exceeded, 4 internal assertion.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence

from . import generators as gens
from . import interchange as ix
from .core import Graph, LayeredPathDecomposition, Layering, PathDecomposition, StackLayout, TrackLayout
from .errors import BudgetExceededError, InternalAssertionError, LpwError, MalformedInputError, PreconditionError
from .oracles import (
    OracleBudget,
    exact_stack_number,
    has_3track_layout,
    optimal_layered_path_decomposition,
)
from .stacks import build_stack_layout
from .tracks import CutTriangle, build_spiral, decompose_3track, saturate
from .verify import (
    collapse_layering,
    layered_width,
    verify_layered_path_decomposition,
    verify_layering,
    verify_path_decomposition,
    verify_stack_layout,
    verify_track_layout,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


class _VerificationFailed(Exception):
    def __init__(self, doc: dict):
        super().__init__(doc.get("message", "verification failed"))
        self.doc = doc


# --------------------------------------------------------------------------
# input handling
# --------------------------------------------------------------------------


class Inputs:
    """All objects found in the given files, grouped by kind (in file order)."""

    def __init__(self, paths: Sequence[str]):
        self.by_kind: dict[str, list[Any]] = {}
        for path in paths:
            text = sys.stdin.read() if path == "-" else _read(path)
            for doc in ix.iter_objects(ix.loads(text)):
                self.by_kind.setdefault(doc["kind"], []).append(ix.from_document(doc, validate=False))

    def take(self, kind: str, required: bool = True):
        found = self.by_kind.get(kind, [])
        if not found:
            if required:
                raise MalformedInputError(f"no {kind} object in the input")
            return None
        return found[0]

    def decomposition(self) -> tuple[PathDecomposition, Layering]:
        lpd = self.take("layered_path_decomposition", required=False)
        if lpd is not None:
            return lpd.decomposition, lpd.layering
        return self.take("path_decomposition"), self.take("layering")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(doc: dict) -> None:
    ix.validate_document(doc)
    sys.stdout.write(ix.dumps(doc))


def _aux(kind: str, **fields) -> dict:
    return {"kind": kind, "format_version": ix.FORMAT_VERSION, **fields}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_gen(a: argparse.Namespace) -> int:
    p = a.params
    fam = a.family

    def need(count: int) -> list[int]:
        if len(p) != count:
            raise MalformedInputError(f"{fam} expects {count} integer parameters, got {len(p)}")
        return p

    seed = a.seed
    if fam == "grid":
        (n,) = need(1)
        g, lpd = gens.gen_grid(n, a.diagonals)
        objs, params = [g, lpd], {"n": n, "diagonals": a.diagonals}
        seed = None
    elif fam == "caterpillar":
        spine, legs = need(2)
        g, t = gens.gen_caterpillar(spine, legs)
        objs, params = [g, t], {"spine": spine, "legs": legs}
        seed = None
    elif fam == "tree-apex":
        (depth,) = need(1)
        objs, params = [gens.gen_tree_plus_apex(depth)], {"depth": depth}
        seed = None
    elif fam == "random3track":
        n1, n2, n3 = need(3)
        g, t = gens.gen_random_3track(n1, n2, n3, a.density, seed, connected=a.connected)
        objs = [g, t]
        params = {"n1": n1, "n2": n2, "n3": n3, "density": a.density, "connected": a.connected}
    elif fam == "staircase3track":
        n1, n2, n3 = need(3)
        g, t = gens.gen_random_staircase_3track(n1, n2, n3, seed)
        objs, params = [g, t], {"n1": n1, "n2": n2, "n3": n3}
    elif fam == "outerplanar":
        (n,) = need(1)
        objs, params = [gens.gen_outerplanar(n, seed)], {"n": n}
    elif fam == "random-layered":
        n, k, layers = need(3)
        g, lpd = gens.gen_random_layered(n, k, layers, a.density, seed)
        objs, params = [g, lpd], {"n": n, "k": k, "layers": layers, "density": a.density}
    else:  # argparse restricts the choices
        raise MalformedInputError(f"unknown family {fam}")
    n = objs[0].n
    docs = [ix.to_document(o, n=n) for o in objs]
    _emit(ix.bundle(docs, generator=fam, params=params, seed=seed))
    return EXIT_OK


def _graph_and_tracks(inp: Inputs) -> tuple[Graph, TrackLayout]:
    g, t = inp.take("graph"), inp.take("track_layout")
    if t.t > 3:
        raise PreconditionError(f"expected a layout with at most 3 tracks, got {t.t}")
    verdict = verify_track_layout(g, t)
    if not verdict:
        raise PreconditionError(f"not a valid track layout: {verdict.message}", verdict)
    return g, t


def cmd_saturate(a: argparse.Namespace) -> int:
    g, t = _graph_and_tracks(Inputs(a.inputs))
    s = saturate(t, g)
    _emit(ix.bundle([ix.to_document(s.graph), ix.to_document(TrackLayout(s.tracks)),
                     _aux("summary", added_edges=[list(e) for e in s.added_edges])]))
    return EXIT_OK


def cmd_spiral(a: argparse.Namespace) -> int:
    g, t = _graph_and_tracks(Inputs(a.inputs))
    s = saturate(t, g)
    if any(len(x) == 0 for x in s.tracks):
        raise PreconditionError("a spiral needs three non-empty tracks")
    p = build_spiral(s)
    kind = "cut_triangle" if isinstance(p, CutTriangle) else "spiral"
    _emit(_aux(kind, vertices=list(p.vertices), track_rotation=list(p.track_rotation), starts=list(p.starts)))
    return EXIT_OK


def cmd_lpd_from_tracks(a: argparse.Namespace) -> int:
    g, t = _graph_and_tracks(Inputs(a.inputs))
    trace: list | None = [] if a.trace else None
    try:
        out = decompose_3track(g, t, trace)
    finally:
        if a.trace:
            with open(a.trace, "w", encoding="utf-8") as fh:
                fh.write(ix.dumps(_aux("trace", stages=trace)))
    _emit(ix.bundle([ix.to_document(g), ix.to_document(out, n=g.n)]))
    return EXIT_OK


def cmd_stack_layout(a: argparse.Namespace) -> int:
    inp = Inputs(a.inputs)
    g = inp.take("graph")
    d, l = inp.decomposition()
    layout = build_stack_layout(g, d, l)
    k = layered_width(d, l)
    summary = _aux("summary", k=k, stacks_used=layout.stack_count, bound=4 * k)
    print(f"layered width {k}, {layout.stack_count} stacks (bound {4 * k})", file=sys.stderr)
    _emit(ix.bundle([ix.to_document(g), ix.to_document(layout), summary]))
    return EXIT_OK


def cmd_collapse(a: argparse.Namespace) -> int:
    inp = Inputs(a.inputs)
    g = inp.take("graph", required=False)
    d, l = inp.decomposition()
    out = collapse_layering(l, d, graph=g)
    if g is not None:
        verdict = verify_layered_path_decomposition(g, out)
        if not verdict or out.layered_width > l.s * layered_width(d, l):
            raise InternalAssertionError("collapsed decomposition rejected", {"message": verdict.message})
    n = g.n if g is not None else None
    docs = ([ix.to_document(g)] if g is not None else []) + [ix.to_document(out, n=n)]
    _emit(ix.bundle(docs))
    return EXIT_OK


_VERIFY_KINDS = ("graph", "layering", "path_decomposition", "layered_path_decomposition",
                 "track_layout", "stack_layout")


def cmd_verify(a: argparse.Namespace) -> int:
    inp = Inputs(a.inputs)
    kind = a.kind
    if kind == "graph":
        inp.take("graph")  # parsing already validated it
        verdict = None
    else:
        g = inp.take("graph")
        if kind == "layering":
            verdict = verify_layering(g, inp.take("layering"))
        elif kind == "path_decomposition":
            d = inp.take("path_decomposition", required=False)
            if d is None:
                d = inp.take("layered_path_decomposition").decomposition
            verdict = verify_path_decomposition(g, d)
        elif kind == "layered_path_decomposition":
            d, l = inp.decomposition()
            verdict = verify_layered_path_decomposition(g, LayeredPathDecomposition(d, l))
        elif kind == "track_layout":
            verdict = verify_track_layout(g, inp.take("track_layout"))
        else:
            verdict = verify_stack_layout(g, inp.take("stack_layout"))
    doc = _aux("verdict", object=kind, **(verdict.as_dict() if verdict is not None else {"ok": True}))
    if not doc["ok"]:
        raise _VerificationFailed(doc)
    _emit(doc)
    return EXIT_OK


def cmd_oracle(a: argparse.Namespace) -> int:
    g = Inputs(a.inputs).take("graph")
    budget = OracleBudget(max_vertices=a.budget_n, time_limit=a.budget_time)
    witness: list[dict] = []
    if a.query == "stack_number":
        value, layout = exact_stack_number(g, budget, witness=True)
        witness = [ix.to_document(layout)]
    elif a.query in ("layered_pathwidth", "weak_layered_pathwidth"):
        s = a.s if a.query == "weak_layered_pathwidth" else 1
        lpd = optimal_layered_path_decomposition(g, s, budget)
        value = lpd.layered_width
        witness = [ix.to_document(lpd, n=g.n)]
    else:
        layout = has_3track_layout(g, budget)
        value = layout is not None
        witness = [ix.to_document(layout)] if layout is not None else []
    print(json.dumps(value), file=sys.stderr)
    _emit(_aux("oracle_result", query=a.query, value=value, witness=witness))
    return EXIT_OK


# --------------------------------------------------------------------------
# DOT export
# --------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def dot_graph(g: Graph) -> str:
    lines = ["graph G {"]
    lines += [f"  {v};" for v in g.vertices()]
    lines += [f"  {u} -- {w};" for u, w in g.edges]
    return "\n".join(lines + ["}"]) + "\n"


def dot_track_layout(g: Graph | None, t: TrackLayout, spacing: float = 1.0) -> str:
    """Tracks drawn as rays from the origin, evenly spaced in angle."""
    lines = ["graph G {", "  layout=neato;", "  node [shape=circle];"]
    for i, track in enumerate(t.tracks):
        angle = math.pi / 2 + 2 * math.pi * i / max(t.t, 1)
        for j, v in enumerate(track):
            x, y = (j + 1) * spacing * math.cos(angle), (j + 1) * spacing * math.sin(angle)
            lines.append(f'  {v} [pos="{_fmt(x)},{_fmt(y)}!", track={i}];')
    if g is not None:
        lines += [f"  {u} -- {w};" for u, w in g.edges]
    return "\n".join(lines + ["}"]) + "\n"


def dot_stack_layout(s: StackLayout, spacing: float = 1.0) -> str:
    """Arc diagram: vertices on a line, each edge a cubic arc labelled by stack."""
    pos = {v: i for i, v in enumerate(s.order)}
    lines = ["graph G {", "  layout=neato;", "  splines=true;", "  node [shape=circle];"]
    for v, i in pos.items():
        lines.append(f'  {v} [pos="{_fmt(i * spacing)},0!"];')
    for (u, w), k in sorted(s.assignment.items()):
        a, b = sorted((pos[u] * spacing, pos[w] * spacing))
        h = (b - a) / 2 * (1 if k % 2 == 0 else -1)
        ctrl = f"{_fmt(a)},0 {_fmt(a)},{_fmt(h)} {_fmt(b)},{_fmt(h)} {_fmt(b)},0"
        lines.append(f'  {u} -- {w} [stack={k}, label="{k}", pos="{ctrl}"];')
    return "\n".join(lines + ["}"]) + "\n"


def cmd_export_dot(a: argparse.Namespace) -> int:
    inp = Inputs(a.inputs)
    g = inp.take("graph", required=False)
    s = inp.take("stack_layout", required=False)
    t = inp.take("track_layout", required=False)
    if s is not None:
        text = dot_stack_layout(s)
    elif t is not None:
        text = dot_track_layout(g, t)
    elif g is not None:
        text = dot_graph(g)
    else:
        raise MalformedInputError("nothing to export: need a graph, track_layout or stack_layout")
    sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= gens.SEED_MAX:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format-version", type=int, default=argparse.SUPPRESS,
                        help="interchange format version (only 1 is supported)")
    parser = argparse.ArgumentParser(prog="lpwkit", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str, inputs: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=func)
        if inputs:
            p.add_argument("inputs", nargs="+", help="interchange files, '-' for stdin")
        return p

    p = add("gen", cmd_gen, "generate a graph family", inputs=False)
    p.add_argument("family", choices=["grid", "caterpillar", "tree-apex", "random3track", "staircase3track",
                                      "outerplanar", "random-layered"])
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--diagonals", action="store_true")
    p.add_argument("--connected", action="store_true")

    add("saturate", cmd_saturate, "add every edge a 3-track layout tolerates")
    add("spiral", cmd_spiral, "greedy spiral path of a saturated 3-track layout")
    p = add("lpd-from-tracks", cmd_lpd_from_tracks, "width <= 4 layered path decomposition of a 3-track graph")
    p.add_argument("--trace", metavar="FILE", help="write the stage trace to FILE")
    add("stack-layout", cmd_stack_layout, "stack layout with <= 4k stacks from a width-k decomposition")
    add("collapse", cmd_collapse, "turn an s-weak layering into an ordinary one")
    p = add("verify", cmd_verify, "check an object against a graph", inputs=False)
    p.add_argument("kind", choices=_VERIFY_KINDS)
    p.add_argument("inputs", nargs="+", help="interchange files, '-' for stdin")
    p = add("oracle", cmd_oracle, "exact values for tiny graphs", inputs=False)
    p.add_argument("query", choices=["stack_number", "layered_pathwidth", "weak_layered_pathwidth", "track3"])
    p.add_argument("inputs", nargs="+", help="interchange files, '-' for stdin")
    p.add_argument("--s", type=int, default=2, help="weakness for weak_layered_pathwidth")
    p.add_argument("--budget-n", type=int, default=OracleBudget.max_vertices)
    p.add_argument("--budget-time", type=float, default=OracleBudget.time_limit)
    add("export-dot", cmd_export_dot, "render as DOT text with positions")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    version = getattr(args, "format_version", ix.FORMAT_VERSION)
    try:
        if version != ix.FORMAT_VERSION:
            raise MalformedInputError(f"unsupported format version {version}")
        return args.func(args)
    except _VerificationFailed as exc:
        sys.stdout.write(ix.dumps(exc.doc))
        print(f"verification failed: {exc.doc.get('message')}", file=sys.stderr)
        return EXIT_VERIFY
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(json.dumps(exc.report.as_dict(), sort_keys=True), file=sys.stderr)
        return EXIT_INPUT
    except (MalformedInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalAssertionError as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        print(json.dumps(exc.instance, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_INTERNAL
    except LpwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
