"""Immutable data model: graphs, layerings, decompositions and linear layouts.

Vertices are dense integers ``0..n-1``. Edges are unordered and stored as
``(u, v)`` tuples with ``u < v``; nothing in this module records an edge
orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import MalformedInputError

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Args:
        n: number of vertices.
        edges: iterable of vertex pairs. Duplicates (in either orientation)
            and self-loops are rejected.
    """

    __slots__ = ("_n", "_edges", "_adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if not isinstance(n, int) or n < 0:
            raise MalformedInputError(f"vertex count must be a non-negative int, got {n!r}")
        seen: set[Edge] = set()
        for pair in edges:
            if len(pair) != 2:
                raise MalformedInputError(f"edge {pair!r} is not a pair")
            u, v = int(pair[0]), int(pair[1])
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedInputError(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
            if u == v:
                raise MalformedInputError(f"self-loop at vertex {u}")
            e = norm_edge(u, v)
            if e in seen:
                raise MalformedInputError(f"duplicate edge {e}")
            seen.add(e)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in seen:
            adj[u].append(v)
            adj[v].append(u)
        self._n = n
        self._edges = tuple(sorted(seen))
        self._edge_set = frozenset(seen)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple[Edge, ...]:
        """Edges in canonical (sorted) order; stack documents index into this."""
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self._edge_set

    def vertices(self) -> range:
        return range(self._n)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        """Return a copy with ``extra`` edges added (already-present ones skipped)."""
        new = {norm_edge(int(a), int(b)) for a, b in extra} - self._edge_set
        return Graph(self._n, list(self._edges) + sorted(new))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={len(self._edges)})"


class Layering:
    """Map from vertices to integer levels, with a weakness bound ``s``.

    ``levels`` may be a sequence indexed by vertex or a mapping; layerings of
    vertex subsets (used for sub-drawings) use the mapping form.
    """

    __slots__ = ("_levels", "_s")

    def __init__(self, levels: Mapping[int, int] | Sequence[int], s: int = 1):
        if isinstance(levels, Mapping):
            lv = {int(k): int(x) for k, x in levels.items()}
        else:
            lv = {i: int(x) for i, x in enumerate(levels)}
        if not isinstance(s, int) or s < 1:
            raise MalformedInputError(f"weakness s must be a positive int, got {s!r}")
        self._levels = lv
        self._s = s

    @property
    def s(self) -> int:
        return self._s

    @property
    def levels(self) -> Mapping[int, int]:
        return self._levels

    def __getitem__(self, v: int) -> int:
        return self._levels[v]

    def __contains__(self, v: object) -> bool:
        return v in self._levels

    def get(self, v: int, default=None):
        return self._levels.get(v, default)

    def layer(self, i: int) -> frozenset[int]:
        return frozenset(v for v, x in self._levels.items() if x == i)

    def as_list(self, n: int) -> list[int]:
        try:
            return [self._levels[v] for v in range(n)]
        except KeyError as exc:
            raise MalformedInputError(f"vertex {exc.args[0]} has no level") from None

    def with_weakness(self, s: int) -> "Layering":
        return Layering(self._levels, s)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Layering) and self._s == other._s and self._levels == other._levels

    def __repr__(self) -> str:
        return f"Layering(s={self._s}, levels={dict(sorted(self._levels.items()))})"


@dataclass(frozen=True)
class PathDecomposition:
    """Ordered sequence of bags."""

    bags: tuple[frozenset[int], ...]

    def __init__(self, bags: Iterable[Iterable[int]]):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in bags))

    def __len__(self) -> int:
        return len(self.bags)

    def __iter__(self):
        return iter(self.bags)

    def intervals(self) -> dict[int, tuple[int, int]]:
        """First and last bag index of every vertex that occurs somewhere."""
        span: dict[int, tuple[int, int]] = {}
        for i, bag in enumerate(self.bags):
            for v in bag:
                lo, _ = span.get(v, (i, i))
                span[v] = (lo, i)
        return span


def compute_layered_width(bags: Iterable[Iterable[int]], layering: Layering) -> int:
    best = 0
    for bag in bags:
        counts: dict[int, int] = {}
        for v in bag:
            x = layering[v]
            counts[x] = counts.get(x, 0) + 1
        if counts:
            best = max(best, max(counts.values()))
    return best


@dataclass(frozen=True)
class LayeredPathDecomposition:
    decomposition: PathDecomposition
    layering: Layering
    layered_width: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "layered_width", compute_layered_width(self.decomposition.bags, self.layering)
        )

    @property
    def bags(self) -> tuple[frozenset[int], ...]:
        return self.decomposition.bags


@dataclass(frozen=True)
class TrackLayout:
    """``t`` ordered tracks; position in the list is the track order."""

    tracks: tuple[tuple[int, ...], ...]

    def __init__(self, tracks: Iterable[Iterable[int]]):
        object.__setattr__(self, "tracks", tuple(tuple(int(v) for v in tr) for tr in tracks))

    @property
    def t(self) -> int:
        return len(self.tracks)

    def position(self) -> dict[int, tuple[int, int]]:
        """vertex -> (track index, index within track)."""
        pos = {}
        for ti, tr in enumerate(self.tracks):
            for i, v in enumerate(tr):
                if v in pos:
                    raise MalformedInputError(f"vertex {v} appears on more than one track slot")
                pos[v] = (ti, i)
        return pos

    def padded(self, t: int) -> "TrackLayout":
        return TrackLayout(list(self.tracks) + [()] * (t - len(self.tracks)))


@dataclass(frozen=True)
class StackLayout:
    """Vertex order plus a stack id per edge."""

    order: tuple[int, ...]
    assignment: Mapping[Edge, int]

    def __init__(self, order: Iterable[int], assignment: Mapping[Sequence[int], int]):
        object.__setattr__(self, "order", tuple(int(v) for v in order))
        object.__setattr__(
            self, "assignment", {norm_edge(int(u), int(v)): int(s) for (u, v), s in assignment.items()}
        )

    @property
    def stack_count(self) -> int:
        return len(set(self.assignment.values()))

    def stacks(self) -> dict[int, list[Edge]]:
        out: dict[int, list[Edge]] = {}
        for e, s in sorted(self.assignment.items()):
            out.setdefault(s, []).append(e)
        return out


@dataclass(frozen=True)
class LevelledDrawing:
    """Vertex subset drawn on horizontal levels, each level ordered left to right."""

    vertices: frozenset[int]
    edges: frozenset[Edge]
    levels: Mapping[int, int]
    within_level_order: Mapping[int, tuple[int, ...]]

    @classmethod
    def from_levels(cls, vertices, edges, levels: Mapping[int, int], key) -> "LevelledDrawing":
        """Build a drawing whose within-level order sorts by ``key(v)``."""
        rows: dict[int, list[int]] = {}
        for v in vertices:
            rows.setdefault(levels[v], []).append(v)
        order = {lv: tuple(sorted(vs, key=key)) for lv, vs in rows.items()}
        return cls(
            frozenset(vertices),
            frozenset(norm_edge(*e) for e in edges),
            {v: levels[v] for v in vertices},
            order,
        )
