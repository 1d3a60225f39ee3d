"""Independent verifiers and width computations.

Every constructive module re-checks its output with the functions here, so
they are deliberately written straight from the definitions and share no
code with the constructions.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .core import (
    Edge,
    Graph,
    LayeredPathDecomposition,
    Layering,
    LevelledDrawing,
    PathDecomposition,
    StackLayout,
    TrackLayout,
    compute_layered_width,
    norm_edge,
)
from .errors import MalformedInputError, PreconditionError


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verifier.

    Truthy iff ``ok``. On failure ``reason`` is a short machine-friendly tag
    and ``witness`` holds the offending objects.
    """

    ok: bool
    reason: str | None = None
    witness: Any = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        return {"ok": self.ok, "reason": self.reason, "witness": _jsonable(self.witness), "message": self.message}


OK = Verdict(True)


def _jsonable(x):
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(y) for y in x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _fail(reason: str, witness: Any, message: str) -> Verdict:
    return Verdict(False, reason, witness, message)


# --------------------------------------------------------------------------
# path decompositions and layerings
# --------------------------------------------------------------------------


def check_decomposition(vertices: Iterable[int], edges: Iterable[Edge], bags: Sequence[Iterable[int]]) -> Verdict:
    """Decomposition check over an arbitrary vertex subset."""
    vertices = set(vertices)
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    count: dict[int, int] = {}
    for i, bag in enumerate(bags):
        for v in bag:
            if v not in vertices:
                raise MalformedInputError(f"bag {i} contains unknown vertex {v}")
            first.setdefault(v, i)
            last[v] = i
            count[v] = count.get(v, 0) + 1
    for v in sorted(vertices):
        if v not in first:
            return _fail("vertex-missing", v, f"vertex {v} is in no bag")
        if last[v] - first[v] + 1 != count[v]:
            return _fail("non-contiguous", v, f"bags containing vertex {v} are not contiguous")
    for u, v in sorted(edges):
        lo, hi = max(first[u], first[v]), min(last[u], last[v])
        if lo > hi:
            return _fail("edge-uncovered", (u, v), f"edge {(u, v)} lies in no bag")
    return OK


def verify_path_decomposition(g: Graph, d: PathDecomposition) -> Verdict:
    for i, bag in enumerate(d.bags):
        for v in bag:
            if not (isinstance(v, int) and 0 <= v < g.n):
                raise MalformedInputError(f"bag {i} holds vertex {v!r} outside 0..{g.n - 1}")
    return check_decomposition(range(g.n), g.edges, d.bags)


def verify_layering(g: Graph, l: Layering) -> Verdict:
    for v in range(g.n):
        if v not in l:
            raise MalformedInputError(f"vertex {v} has no level")
    worst = None
    for u, v in g.edges:
        span = abs(l[u] - l[v])
        if span > l.s and (worst is None or span > worst[0]):
            worst = (span, (u, v))
    if worst is not None:
        return _fail("edge-too-long", worst[1], f"edge {worst[1]} spans {worst[0]} levels > s={l.s}")
    return OK


def layered_width(d: PathDecomposition | Iterable[Iterable[int]], l: Layering) -> int:
    bags = d.bags if isinstance(d, PathDecomposition) else d
    for bag in bags:
        for v in bag:
            if v not in l:
                raise MalformedInputError(f"vertex {v} in a bag has no level")
    return compute_layered_width(bags, l)


def verify_layered_path_decomposition(g: Graph, lpd: LayeredPathDecomposition) -> Verdict:
    v = verify_path_decomposition(g, lpd.decomposition)
    if not v:
        return v
    v = verify_layering(g, lpd.layering)
    if not v:
        return v
    if layered_width(lpd.decomposition, lpd.layering) != lpd.layered_width:
        return _fail("width-mismatch", lpd.layered_width, "stored layered width is stale")
    return OK


def collapse_layering(l: Layering, d: PathDecomposition, graph: Graph | None = None) -> LayeredPathDecomposition:
    """Turn an ``s``-weak layered decomposition into an ordinary one.

    Levels are floor-divided by ``s`` (toward minus infinity), which merges
    ``s`` consecutive levels into one; bags are kept. The width grows by at
    most a factor of ``s``.
    """
    if graph is not None:
        for verdict in (verify_path_decomposition(graph, d), verify_layering(graph, l)):
            if not verdict:
                raise PreconditionError(f"collapse_layering input invalid: {verdict.message}", verdict)
    s = l.s
    return LayeredPathDecomposition(d, Layering({v: x // s for v, x in l.levels.items()}, 1))


# --------------------------------------------------------------------------
# track layouts
# --------------------------------------------------------------------------


def verify_track_layout(g: Graph, t: TrackLayout) -> Verdict:
    pos: dict[int, tuple[int, int]] = {}
    for ti, tr in enumerate(t.tracks):
        for i, v in enumerate(tr):
            if not (isinstance(v, int) and 0 <= v < g.n):
                raise MalformedInputError(f"track {ti} holds vertex {v!r} outside 0..{g.n - 1}")
            if v in pos:
                raise MalformedInputError(f"vertex {v} appears on tracks {pos[v][0]} and {ti}")
            pos[v] = (ti, i)
    for v in range(g.n):
        if v not in pos:
            return _fail("vertex-missing", v, f"vertex {v} is on no track")
    by_pair: dict[tuple[int, int], list[tuple[int, int, Edge]]] = {}
    for u, v in g.edges:
        (tu, iu), (tv, iv) = pos[u], pos[v]
        if tu == tv:
            return _fail("intra-track-edge", (u, v), f"edge {(u, v)} joins two vertices of track {tu}")
        if tu > tv:
            tu, iu, tv, iv = tv, iv, tu, iu
        by_pair.setdefault((tu, tv), []).append((iu, iv, (u, v)))
    for pair, items in sorted(by_pair.items()):
        items.sort()
        # after sorting by the first track, any decrease on the second is an X-crossing
        best = None
        for iu, iv, e in items:
            if best is not None and iv < best[1] and iu > best[0]:
                return _fail("x-crossing", (best[2], e), f"edges {best[2]} and {e} form an X-crossing")
            if best is None or iv > best[1]:
                best = (iu, iv, e)
    return OK


# --------------------------------------------------------------------------
# stack layouts
# --------------------------------------------------------------------------


def crossing_pairs(order: Sequence[int], edges: Iterable[Sequence[int]]) -> list[tuple[Edge, Edge]]:
    """All pairs of edges that cross with respect to ``order``.

    Each pair is reported once as ``(e, f)`` where ``e`` has the earlier left
    endpoint; ``e = (v, w)``, ``f = (x, y)`` cross iff ``v < x < w < y`` in
    positions.
    """
    pos = {v: i for i, v in enumerate(order)}
    spans = []
    for u, v in edges:
        a, b = pos[u], pos[v]
        if a > b:
            a, b = b, a
        spans.append((a, b, norm_edge(u, v)))
    spans.sort()
    lefts = [s[0] for s in spans]
    out = []
    for i, (a, b, e) in enumerate(spans):
        # candidates start strictly inside (a, b)
        j = bisect_right(lefts, a, lo=i + 1)
        k = bisect_right(lefts, b - 1, lo=j)
        for a2, b2, f in spans[j:k]:
            if b < b2:
                out.append((e, f))
    return out


def verify_stack_layout(g: Graph, s: StackLayout) -> Verdict:
    if sorted(s.order) != list(range(g.n)):
        raise MalformedInputError("stack layout order is not a permutation of the vertices")
    for e in g.edges:
        if e not in s.assignment:
            raise MalformedInputError(f"edge {e} has no stack")
    for e in s.assignment:
        if not g.has_edge(*e):
            raise MalformedInputError(f"stack assignment mentions non-edge {e}")
    per_stack: dict[int, list[Edge]] = {}
    for e in g.edges:
        per_stack.setdefault(s.assignment[e], []).append(e)
    for sid in sorted(per_stack):
        pairs = crossing_pairs(s.order, per_stack[sid])
        if pairs:
            return _fail("crossing", {"stack": sid, "edges": pairs[0]},
                         f"edges {pairs[0][0]} and {pairs[0][1]} cross in stack {sid}")
    return OK


# --------------------------------------------------------------------------
# levelled drawings
# --------------------------------------------------------------------------


def verify_levelled_drawing(d: LevelledDrawing) -> Verdict:
    placed: dict[int, int] = {}
    for lv, row in d.within_level_order.items():
        for i, v in enumerate(row):
            if d.levels.get(v) != lv or v in placed:
                raise MalformedInputError(f"vertex {v} misplaced in the level order")
            placed[v] = i
    if set(placed) != set(d.vertices):
        raise MalformedInputError("level order does not cover the drawing's vertices")
    between: dict[int, list[tuple[int, int, Edge]]] = {}
    for u, v in sorted(d.edges):
        lu, lv = d.levels[u], d.levels[v]
        if abs(lu - lv) != 1:
            return _fail("not-consecutive", (u, v), f"edge {(u, v)} joins levels {lu} and {lv}")
        if lu > lv:
            u, v, lu = v, u, lv
        between.setdefault(lu, []).append((placed[u], placed[v], norm_edge(u, v)))
    for lv, items in sorted(between.items()):
        items.sort()
        best = None
        for a, b, e in items:
            if best is not None and a > best[0] and b < best[1]:
                return _fail("crossing", (best[2], e), f"edges {best[2]} and {e} cross")
            if best is None or b > best[1]:
                best = (a, b, e)
    return OK
