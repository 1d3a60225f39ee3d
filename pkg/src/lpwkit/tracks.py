"""Layered path decompositions of 3-track graphs.

Pipeline for a 3-track layout ``T_1, T_2, T_3`` (tracks ordered outward, as
in the three-ray drawing):

1. ``saturate`` adds every inter-track edge that the fixed layout tolerates.
2. ``build_spiral`` grows a path that visits the tracks cyclically, always
   jumping to the furthest unused neighbour on the next track. A one-per-track
   triangle met on the way splits the instance into an inner and an outer
   part (``CutTriangle``).
3. ``assign_weak_layering`` puts the i-th path vertex on level ``i`` and every
   other vertex on the level of the next path vertex of its track; this is a
   2-weak layering.
4. ``unfold_remainder`` / ``levelled_width1_decomposition`` give the graph
   minus the path a width-1 decomposition; ``merge_with_path`` adds the path to
   every bag (width 2).
5. ``decompose_3track`` glues the parts and collapses the 2-weak layering,
   giving an ordinary layered path decomposition of width at most 4.

After a cut the outer part starts on a triangle from which the spiral cannot
move forward, so that part is grown in the opposite cyclic direction and its
levels are mirrored (``l -> 4 - l`` before shifting). Residues mod 3 per track
and the levels of the shared triangle are preserved by the mirror.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .core import (
    Edge,
    Graph,
    LayeredPathDecomposition,
    Layering,
    LevelledDrawing,
    PathDecomposition,
    TrackLayout,
    norm_edge,
)
from .errors import InternalAssertionError, PreconditionError
from .verify import (
    check_decomposition,
    collapse_layering,
    layered_width,
    verify_layering,
    verify_levelled_drawing,
    verify_path_decomposition,
    verify_track_layout,
)

Rotation = tuple[int, int, int]

# --------------------------------------------------------------------------
# saturation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SaturatedTrackLayout:
    layout: TrackLayout
    graph: Graph
    added_edges: tuple[Edge, ...]
    pos: dict[int, tuple[int, int]] = field(repr=False, compare=False)
    # nbr_index[v][t]: sorted positions on track t of v's neighbours
    nbr_index: dict[int, tuple[tuple[int, ...], ...]] = field(repr=False, compare=False)

    @classmethod
    def build(cls, layout: TrackLayout, graph: Graph, added: Iterable[Edge]) -> "SaturatedTrackLayout":
        pos = layout.position()
        nbr = {}
        for v in graph.vertices():
            per = [[] for _ in range(layout.t)]
            for w in graph.neighbours(v):
                tw, iw = pos[w]
                per[tw].append(iw)
            nbr[v] = tuple(tuple(sorted(p)) for p in per)
        return cls(layout, graph, tuple(sorted(added)), pos, nbr)

    @property
    def tracks(self) -> tuple[tuple[int, ...], ...]:
        return self.layout.tracks

    def track_of(self, v: int) -> int:
        return self.pos[v][0]

    def index_of(self, v: int) -> int:
        return self.pos[v][1]

    def furthest(self, v: int, track: int) -> int | None:
        """Largest position on ``track`` adjacent to ``v``."""
        idx = self.nbr_index[v][track]
        return idx[-1] if idx else None

    def instance(self) -> dict:
        return {"n": self.graph.n, "edges": [list(e) for e in self.graph.edges],
                "tracks": [list(t) for t in self.tracks]}


_PAIR_ORDER = ((0, 1), (1, 2), (0, 2))


def _blocked(i: int, j: int, present: set[tuple[int, int]]) -> bool:
    return any((i2 > i and j2 < j) or (i2 < i and j2 > j) for i2, j2 in present)


def saturate(t: TrackLayout, g: Graph) -> SaturatedTrackLayout:
    """Add inter-track edges until no further edge avoids an X-crossing.

    Candidate pairs are scanned track pair by track pair in the order
    (1,2), (2,3), (1,3), each lexicographically by position, repeating passes
    until one adds nothing. Layouts with fewer than three tracks are padded
    with empty tracks.
    """
    if t.t > 3:
        raise PreconditionError(f"expected at most 3 tracks, got {t.t}")
    verdict = verify_track_layout(g, t)
    if not verdict:
        raise PreconditionError(f"not a valid track layout: {verdict.message}", verdict)
    layout = t.padded(3)
    pos = layout.position()
    present: dict[tuple[int, int], set[tuple[int, int]]] = {p: set() for p in _PAIR_ORDER}
    for u, v in g.edges:
        (tu, iu), (tv, iv) = pos[u], pos[v]
        if tu > tv:
            tu, iu, tv, iv = tv, iv, tu, iu
        present[(tu, tv)].add((iu, iv))
    added: list[Edge] = []
    changed = True
    while changed:
        changed = False
        for a, b in _PAIR_ORDER:
            have = present[(a, b)]
            for i in range(len(layout.tracks[a])):
                for j in range(len(layout.tracks[b])):
                    if (i, j) in have or _blocked(i, j, have):
                        continue
                    have.add((i, j))
                    added.append(norm_edge(layout.tracks[a][i], layout.tracks[b][j]))
                    changed = True
    sat = g.with_edges(added)
    return SaturatedTrackLayout.build(layout, sat, added)


def is_saturated(s: SaturatedTrackLayout) -> bool:
    """Brute-force fixpoint check: every absent inter-track edge would X-cross."""
    tracks = s.tracks
    for a, b in _PAIR_ORDER:
        for u in tracks[a]:
            for w in tracks[b]:
                if s.graph.has_edge(u, w):
                    continue
                trial = s.graph.with_edges([(u, w)])
                if verify_track_layout(trial, s.layout):
                    return False
    return True


# --------------------------------------------------------------------------
# observation cases and the spiral
# --------------------------------------------------------------------------


class ObservationCase(NamedTuple):
    tag: str
    witness: Edge


def observation_case(s: SaturatedTrackLayout, a: int, b: int) -> ObservationCase:
    """Classify the pair ``(a, b)`` on distinct tracks.

    Returns the first of: ``edge-present`` (``ab`` is an edge),
    ``far-crossing-edge`` (an edge from beyond ``a`` to before ``b``),
    ``further-neighbour`` (``a`` has a neighbour beyond ``b``).
    """
    (ta, ia), (tb, ib) = s.pos[a], s.pos[b]
    if ta == tb:
        raise PreconditionError(f"vertices {a} and {b} share track {ta}")
    if s.graph.has_edge(a, b):
        return ObservationCase("edge-present", norm_edge(a, b))
    for i2 in range(ia + 1, len(s.tracks[ta])):
        x = s.tracks[ta][i2]
        for j2 in s.nbr_index[x][tb]:
            if j2 < ib:
                return ObservationCase("far-crossing-edge", norm_edge(x, s.tracks[tb][j2]))
    hi = s.furthest(a, tb)
    if hi is not None and hi > ib:
        return ObservationCase("further-neighbour", norm_edge(a, s.tracks[tb][hi]))
    raise InternalAssertionError(
        f"no observation case applies to vertices {a} and {b}",
        {**s.instance(), "pair": [a, b]},
    )


@dataclass(frozen=True)
class SpiralPath:
    """Complete spiral; ``vertices[i]`` lies on track ``track_rotation[i % 3]``."""

    vertices: tuple[int, ...]
    track_rotation: Rotation
    starts: tuple[int, int, int] = (0, 0, 0)


@dataclass(frozen=True)
class CutTriangle:
    """Spiral prefix whose last three vertices form a separating triangle."""

    vertices: tuple[int, ...]
    track_rotation: Rotation
    starts: tuple[int, int, int] = (0, 0, 0)

    @property
    def triangle(self) -> tuple[int, int, int]:
        return tuple(self.vertices[-3:])


class _Stuck(Exception):
    pass


def _grow(s: SaturatedTrackLayout, starts: Sequence[int], rot: Rotation) -> SpiralPath | CutTriangle:
    tracks = s.tracks
    last = {t: len(tracks[t]) - 1 for t in range(3)}
    path = [tracks[rot[0]][starts[rot[0]]]]
    while True:
        k = len(path)
        cur = path[-1]
        nxt = rot[k % 3]
        if k >= 3 and all(s.index_of(v) == last[s.track_of(v)] for v in path[-3:]):
            return SpiralPath(tuple(path), rot, tuple(starts))
        hi = s.furthest(cur, nxt)
        if k < 3:
            if hi is None or hi < starts[nxt]:
                raise InternalAssertionError(
                    f"spiral cannot leave vertex {cur} at step {k}", {**s.instance(), "path": path}
                )
            path.append(tracks[nxt][hi])
            continue
        back = path[-3]
        if s.graph.has_edge(cur, back):
            at_start = k == 3 and all(s.index_of(v) == starts[s.track_of(v)] for v in path)
            if not at_start:
                return CutTriangle(tuple(path), rot, tuple(starts))
            if hi is not None and hi > s.index_of(back):
                path.append(tracks[nxt][hi])
                continue
            raise _Stuck
        if hi is not None and hi > s.index_of(back):
            path.append(tracks[nxt][hi])
            continue
        case = observation_case(s, cur, back)
        raise InternalAssertionError(
            f"spiral stuck at {cur}: observation case {case.tag} with witness {case.witness}",
            {**s.instance(), "path": path, "case": case.tag, "witness": list(case.witness)},
        )


def build_spiral(
    s: SaturatedTrackLayout,
    starts: Sequence[int] = (0, 0, 0),
    rotation: Rotation = (0, 1, 2),
) -> SpiralPath | CutTriangle:
    """Grow the furthest-neighbour spiral from the first vertex of ``rotation[0]``.

    ``starts`` restricts the instance to the track suffixes beginning at those
    positions (the outer part after a cut). If the spiral cannot leave the
    starting triangle in the requested direction it is grown in the reverse
    cyclic direction; the returned ``track_rotation`` says which one was used.
    """
    for t in range(3):
        if starts[t] >= len(s.tracks[t]):
            raise PreconditionError("spiral needs three non-empty tracks")
    try:
        return _grow(s, starts, rotation)
    except _Stuck:
        pass
    reverse = (rotation[2], rotation[1], rotation[0])
    try:
        return _grow(s, starts, reverse)
    except _Stuck:
        raise InternalAssertionError(
            "spiral stuck on its starting triangle in both directions",
            {**s.instance(), "starts": list(starts)},
        ) from None


# --------------------------------------------------------------------------
# one piece: weak layering, levelled remainder, width-1 decomposition
# --------------------------------------------------------------------------


def piece_vertices(s: SaturatedTrackLayout, p: SpiralPath | CutTriangle) -> list[int]:
    """Vertices between ``p.starts`` and the last path vertex, track by track."""
    top = {t: p.starts[t] - 1 for t in range(3)}
    for v in p.vertices:
        t, i = s.pos[v]
        top[t] = max(top[t], i)
    return [v for t in range(3) for v in s.tracks[t][p.starts[t]: top[t] + 1]]


def assign_weak_layering(s: SaturatedTrackLayout, p: SpiralPath | CutTriangle) -> Layering:
    """Levels for the piece covered by ``p``: ``v_i -> i``, others copy their track successor on the path."""
    levels: dict[int, int] = {}
    for i, v in enumerate(p.vertices, start=1):
        levels[v] = i
    for t in range(3):
        on_path = sorted((s.index_of(v), levels[v]) for v in p.vertices if s.track_of(v) == t)
        cursor = 0
        for v in piece_vertices(s, p):
            if s.track_of(v) != t or v in levels:
                continue
            i = s.index_of(v)
            while cursor < len(on_path) and on_path[cursor][0] < i:
                cursor += 1
            if cursor == len(on_path):
                raise InternalAssertionError(
                    f"vertex {v} has no successor on the spiral", {**s.instance(), "path": list(p.vertices)}
                )
            levels[v] = on_path[cursor][1]
    return Layering(levels, 2)


def unfold_remainder(s: SaturatedTrackLayout, p: SpiralPath | CutTriangle, l: Layering) -> LevelledDrawing:
    """Levelled drawing of the piece minus the path, levels from ``l``, rows in track order."""
    on_path = set(p.vertices)
    rest = [v for v in piece_vertices(s, p) if v not in on_path]
    inside = set(rest)
    edges = [(u, w) for u in rest for w in s.graph.neighbours(u) if w in inside and u < w]
    drawing = LevelledDrawing.from_levels(rest, edges, {v: l[v] for v in rest}, key=s.index_of)
    verdict = verify_levelled_drawing(drawing)
    if not verdict:
        raise InternalAssertionError(
            f"remainder is not levelled planar: {verdict.message}",
            {**s.instance(), "path": list(p.vertices), "starts": list(p.starts)},
        )
    return drawing


def levelled_width1_decomposition(d: LevelledDrawing) -> LayeredPathDecomposition:
    """Width-1 layered path decomposition of a levelled planar drawing.

    A sweep keeps one current vertex per level and advances one level at a
    time; every bag is the set of current vertices. Each advance is an event,
    and an edge ``(u, w)`` between adjacent levels forces ``u`` and ``w`` to be
    current together, which orders the events around them. The events are
    scheduled by a topological sort of those constraints.
    """
    rows = {lv: row for lv, row in d.within_level_order.items() if row}
    index = {v: i for row in rows.values() for i, v in enumerate(row)}
    succ: dict[tuple[int, int], list[tuple[int, int]]] = {}
    indeg: dict[tuple[int, int], int] = {}
    for lv, row in rows.items():
        for i in range(len(row) - 1):
            indeg[(lv, i)] = 0
            succ[(lv, i)] = []

    def before(a, b):
        if a in indeg and b in indeg:
            succ[a].append(b)
            indeg[b] += 1

    for lv, row in rows.items():
        for i in range(1, len(row) - 1):
            before((lv, i - 1), (lv, i))
    for u, w in sorted(d.edges):
        lu, lw = d.levels[u], d.levels[w]
        if abs(lu - lw) != 1:
            raise InternalAssertionError(f"edge {(u, w)} is not between consecutive levels")
        a, b = index[u], index[w]
        # u becomes current before w is left, and vice versa
        before((lu, a - 1), (lw, b))
        before((lw, b - 1), (lu, a))

    heap = [e for e, deg in indeg.items() if deg == 0]
    heapq.heapify(heap)
    schedule = []
    while heap:
        e = heapq.heappop(heap)
        schedule.append(e)
        for f in succ[e]:
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(heap, f)
    instance = {"levels": {str(v): x for v, x in d.levels.items()},
                "rows": {str(k): list(r) for k, r in rows.items()},
                "edges": [list(e) for e in sorted(d.edges)]}
    if len(schedule) != len(indeg):
        raise InternalAssertionError("sweep constraints are cyclic (drawing not levelled planar)", instance)

    cur = {lv: 0 for lv in rows}
    bags = [frozenset(rows[lv][0] for lv in rows)] if rows else []
    for lv, i in schedule:
        cur[lv] = i + 1
        bags.append(frozenset(rows[k][c] for k, c in cur.items()))
    layering = Layering(dict(d.levels), 1)
    result = LayeredPathDecomposition(PathDecomposition(bags), layering)
    verdict = check_decomposition(d.vertices, d.edges, bags)
    if not verdict or result.layered_width > 1:
        raise InternalAssertionError(f"levelled sweep produced a bad decomposition: {verdict.message}", instance)
    return result


@dataclass(frozen=True)
class WeakLayeredResult:
    """2-weak layered path decomposition with its boundary triangles.

    ``track_rotation[i]`` is the input track playing the role of ``T_{i+1}``.
    """

    layering: Layering
    decomposition: PathDecomposition
    first_bag: frozenset[int]
    last_bag: frozenset[int]
    track_rotation: Rotation = (0, 1, 2)

    @property
    def layered_width(self) -> int:
        return layered_width(self.decomposition, self.layering)


def _dedupe(bags: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    for b in bags:
        if not out or out[-1] != b:
            out.append(b)
    return out


def merge_with_path(
    wd: LayeredPathDecomposition,
    p: SpiralPath | CutTriangle,
    l: Layering,
    first_bag: Iterable[int],
) -> WeakLayeredResult:
    """Add the path to every bag of ``wd`` and frame with the boundary triangles."""
    path = frozenset(p.vertices)
    middle = [b | path for b in wd.bags] or [path]
    first, last = frozenset(first_bag), frozenset(p.vertices[-3:])
    bags = _dedupe([first, *middle, last])
    result = WeakLayeredResult(l, PathDecomposition(bags), first, last, p.track_rotation)
    if result.layered_width > 2:
        raise InternalAssertionError(
            f"merged piece has layered width {result.layered_width} > 2",
            {"path": list(p.vertices), "bags": [sorted(b) for b in bags]},
        )
    return result


# --------------------------------------------------------------------------
# recursion over cut triangles
# --------------------------------------------------------------------------


def _piece(s: SaturatedTrackLayout, p: SpiralPath | CutTriangle, trace: list | None) -> WeakLayeredResult:
    l = assign_weak_layering(s, p)
    drawing = unfold_remainder(s, p, l)
    wd = levelled_width1_decomposition(drawing)
    first = [s.tracks[t][p.starts[t]] for t in range(3)]
    merged = merge_with_path(wd, p, l, first)
    verts = piece_vertices(s, p)
    vs = set(verts)
    sub_edges = [e for e in s.graph.edges if e[0] in vs and e[1] in vs]
    verdict = check_decomposition(verts, sub_edges, merged.decomposition.bags)
    if not verdict:
        raise InternalAssertionError(f"piece decomposition invalid: {verdict.message}",
                                     {**s.instance(), "path": list(p.vertices), "starts": list(p.starts)})
    for u, w in sub_edges:
        if abs(l[u] - l[w]) > 2:
            raise InternalAssertionError(f"edge {(u, w)} spans more than two levels",
                                         {**s.instance(), "path": list(p.vertices), "starts": list(p.starts)})
    if trace is not None:
        trace.append({
            "stage": "piece",
            "starts": list(p.starts),
            "rotation": list(p.track_rotation),
            "spiral": list(p.vertices),
            "cut": isinstance(p, CutTriangle),
            "weak_levels": {str(v): x for v, x in sorted(l.levels.items())},
            "levelled_rows": {str(k): list(r) for k, r in sorted(drawing.within_level_order.items())},
            "levelled_bags": [sorted(b) for b in wd.bags],
            "merged_bags": [sorted(b) for b in merged.decomposition.bags],
        })
    return merged


def _weak_recursive(s: SaturatedTrackLayout, starts: Sequence[int], rotation: Rotation,
           trace: list | None) -> tuple[dict[int, int], list[frozenset[int]], tuple[int, ...]]:
    """Levels, bags and final triangle (in level order) for the suffix at ``starts``.

    The start triangle receives levels 1, 2, 3 on ``rotation[0..2]``.
    """
    p = build_spiral(s, starts, rotation)
    piece = _piece(s, p, trace)
    levels = dict(piece.layering.levels)
    bags = list(piece.decomposition.bags)
    tail = tuple(p.vertices[-3:])
    if isinstance(p, CutTriangle):
        tri = p.triangle
        new_starts = list(starts)
        for v in tri:
            new_starts[s.track_of(v)] = s.index_of(v)
        sub_rot = tuple(s.track_of(v) for v in tri)
        sub_levels, sub_bags, sub_tail = _weak_recursive(s, new_starts, sub_rot, trace)
        shift = len(p.vertices) - 3
        for v, x in sub_levels.items():
            x += shift
            if v in levels and levels[v] != x:
                raise InternalAssertionError(f"cut triangle vertex {v} gets two levels", s.instance())
            levels[v] = x
        if bags[-1] != sub_bags[0]:
            raise InternalAssertionError("glued pieces do not share the cut triangle bag", s.instance())
        bags = _dedupe(bags + sub_bags)
        tail = sub_tail
    if p.track_rotation != tuple(rotation):
        levels = {v: 4 - x for v, x in levels.items()}
    return levels, bags, tail


def boundary_conditions(result: WeakLayeredResult, s: SaturatedTrackLayout) -> dict[int, bool]:
    """The five boundary/residue conditions, with tracks read through the result's rotation."""
    l = result.layering
    rot = result.track_rotation
    tracks = [s.tracks[t] for t in rot]
    mins = [tr[0] for tr in tracks]
    maxs = [tr[-1] for tr in tracks]
    bags = result.decomposition.bags
    final_levels = sorted(l[v] for v in maxs)
    return {
        1: all(l[v] % 3 == (i + 1) % 3 for i, tr in enumerate(tracks) for v in tr),
        2: bool(bags) and bags[0] == frozenset(mins),
        3: [l[v] for v in mins] == [1, 2, 3],
        4: bool(bags) and bags[-1] == frozenset(maxs),
        5: len(set(final_levels)) == 3 and final_levels[2] - final_levels[0] == 2,
    }


def weak_decompose(s: SaturatedTrackLayout, trace: list | None = None) -> WeakLayeredResult:
    """2-weak layered path decomposition of width <= 2 of a saturated 3-track layout.

    All three tracks must be non-empty. The result is re-verified on the
    saturated graph and checked against the five boundary conditions.
    """
    if any(len(t) == 0 for t in s.tracks):
        raise PreconditionError("weak decomposition needs three non-empty tracks")
    levels, bags, _ = _weak_recursive(s, (0, 0, 0), (0, 1, 2), trace)
    first = bags[0]
    # the top-level spiral may have been reversed; recover the rotation from the first triangle
    mins = {s.tracks[t][0]: t for t in range(3)}
    rot = tuple(sorted(mins.values(), key=lambda t: levels[s.tracks[t][0]]))
    layering = Layering(levels, 2)
    result = WeakLayeredResult(layering, PathDecomposition(bags), first, bags[-1], rot)
    problems = []
    for verdict in (verify_path_decomposition(s.graph, result.decomposition), verify_layering(s.graph, layering)):
        if not verdict:
            problems.append(verdict.message)
    if result.layered_width > 2:
        problems.append(f"layered width {result.layered_width} > 2")
    conds = boundary_conditions(result, s)
    problems += [f"condition {c} fails" for c, okc in conds.items() if not okc]
    if problems:
        raise InternalAssertionError("weak decomposition rejected: " + "; ".join(problems), s.instance())
    if trace is not None:
        trace.append({"stage": "weak_result", "rotation": list(rot),
                      "levels": {str(v): x for v, x in sorted(levels.items())},
                      "bags": [sorted(b) for b in bags], "layered_width": result.layered_width})
    return result


# --------------------------------------------------------------------------
# top-level driver
# --------------------------------------------------------------------------


def _small_case(g: Graph) -> LayeredPathDecomposition:
    """Single bag with the best layering found by enumeration (n <= 4)."""
    best = None
    for levels in itertools.product(range(g.n), repeat=g.n):
        lay = Layering(list(levels))
        if not verify_layering(g, lay):
            continue
        w = layered_width([range(g.n)], lay)
        if best is None or w < best[0]:
            best = (w, lay)
    return LayeredPathDecomposition(PathDecomposition([range(g.n)]), best[1])


def _two_track_case(s: SaturatedTrackLayout) -> LayeredPathDecomposition:
    """Caterpillar forest: one level, bags are the staircase edges in order."""
    used = [t for t in range(3) if s.tracks[t]]
    layering = Layering([0] * s.graph.n)
    if len(used) == 1:
        bags = [[v] for v in s.tracks[used[0]]]
    else:
        a, b = used
        pairs = sorted((s.index_of(u), s.index_of(w)) if s.track_of(u) == a else (s.index_of(w), s.index_of(u))
                       for u, w in s.graph.edges)
        bags = [[s.tracks[a][i], s.tracks[b][j]] for i, j in pairs]
    return LayeredPathDecomposition(PathDecomposition(bags), layering)


def decompose_3track(g: Graph, t: TrackLayout, trace: list | None = None) -> LayeredPathDecomposition:
    """Ordinary layered path decomposition of width <= 4 for a graph with a 3-track layout.

    Raises:
        PreconditionError: if ``t`` is not a valid layout with at most 3 tracks.
        InternalAssertionError: if any intermediate or final check fails.
    """
    if t.t > 3:
        raise PreconditionError(f"expected a layout with at most 3 tracks, got {t.t}")
    verdict = verify_track_layout(g, t)
    if not verdict:
        raise PreconditionError(f"not a valid track layout: {verdict.message}", verdict)
    if g.n == 0:
        return LayeredPathDecomposition(PathDecomposition([]), Layering([]))
    if g.n <= 4:
        out = _small_case(g)
        if trace is not None:
            trace.append({"stage": "small_case", "n": g.n})
    else:
        s = saturate(t, g)
        if trace is not None:
            trace.append({"stage": "saturate", "tracks": [list(x) for x in s.tracks],
                          "added_edges": [list(e) for e in s.added_edges]})
        if any(len(x) == 0 for x in s.tracks):
            out = _two_track_case(s)
            if trace is not None:
                trace.append({"stage": "caterpillar_forest"})
        else:
            weak = weak_decompose(s, trace)
            out = collapse_layering(weak.layering, weak.decomposition)
    problems = []
    for verdict in (verify_path_decomposition(g, out.decomposition), verify_layering(g, out.layering)):
        if not verdict:
            problems.append(verdict.message)
    if out.layered_width > 4:
        problems.append(f"layered width {out.layered_width} > 4")
    if problems:
        raise InternalAssertionError("3-track decomposition rejected: " + "; ".join(problems),
                                     {"n": g.n, "edges": [list(e) for e in g.edges],
                                      "tracks": [list(x) for x in t.tracks]})
    if trace is not None:
        trace.append({"stage": "collapsed", "bags": [sorted(b) for b in out.bags],
                      "levels": out.layering.as_list(g.n), "layered_width": out.layered_width})
    return out
