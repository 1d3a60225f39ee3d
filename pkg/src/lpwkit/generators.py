"""Deterministic and seeded graph families with their known layouts.

Random generators draw only from ``numpy.random.Generator(PCG64(seed))``;
the draw sequence of each generator is frozen for ``format_version`` 1.
"""

from __future__ import annotations

import numpy as np

from .core import Graph, LayeredPathDecomposition, Layering, PathDecomposition, TrackLayout
from .interchange import FORMAT_VERSION, content_hash
from .tracks import saturate

SEED_MAX = 2**64 - 1


def _rng(seed: int) -> np.random.Generator:
    if not (isinstance(seed, (int, np.integer)) and 0 <= int(seed) <= SEED_MAX):
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def gen_grid(n: int, diagonals: bool = False) -> tuple[Graph, LayeredPathDecomposition]:
    """``n x n`` grid (vertex ``r*n + c``), optionally with one diagonal per cell.

    The companion decomposition has one bag per pair of consecutive columns
    and one layer per row.
    """
    if n < 1:
        raise ValueError("grid side must be >= 1")
    vid = lambda r, c: r * n + c  # noqa: E731
    edges = []
    for r in range(n):
        for c in range(n):
            if c + 1 < n:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < n:
                edges.append((vid(r, c), vid(r + 1, c)))
            if diagonals and r + 1 < n and c + 1 < n:
                edges.append((vid(r, c), vid(r + 1, c + 1)))
    g = Graph(n * n, edges)
    if n == 1:
        bags = [[0]]
    else:
        bags = [[vid(r, c) for r in range(n) for c in (col, col + 1)] for col in range(n - 1)]
    levels = [v // n for v in range(n * n)]
    return g, LayeredPathDecomposition(PathDecomposition(bags), Layering(levels))


def gen_caterpillar(spine: int, legs: int) -> tuple[Graph, TrackLayout]:
    """Caterpillar with ``legs`` leaves per spine vertex and a 2-track layout.

    Spine vertex ``i`` sits on track ``i % 2`` and its leaves on the other
    track; both tracks are ordered by spine position, so the edges form one
    staircase per track pair.
    """
    if spine < 1 or legs < 0:
        raise ValueError("need spine >= 1 and legs >= 0")
    edges = []
    spine_ids = list(range(spine))
    nxt = spine
    slots: list[list[tuple[int, int]]] = [[], []]  # (spine position, vertex)
    for i, s in enumerate(spine_ids):
        slots[i % 2].append((i, s))
        if i + 1 < spine:
            edges.append((s, s + 1))
        for _ in range(legs):
            edges.append((s, nxt))
            slots[1 - i % 2].append((i, nxt))
            nxt += 1
    tracks = [[v for _, v in sorted(sl)] for sl in slots]
    return Graph(nxt, edges), TrackLayout(tracks)


def gen_tree_plus_apex(depth: int) -> Graph:
    """Complete binary tree of the given depth plus a vertex adjacent to all of it."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    size = 2 ** (depth + 1) - 1
    edges = [((i - 1) // 2, i) for i in range(1, size)]
    edges += [(i, size) for i in range(size)]
    return Graph(size + 1, edges)


def gen_random_3track(n1: int, n2: int, n3: int, density: float, seed: int,
                      connected: bool = False) -> tuple[Graph, TrackLayout]:
    """Random subgraph of the saturated layout with the given track sizes.

    Vertices are numbered track by track. Each saturating edge survives with
    probability ``density``; with ``connected`` a random spanning forest of
    the saturated graph is always kept.
    """
    if min(n1, n2, n3) < 0 or not (0.0 <= density <= 1.0):
        raise ValueError("track sizes must be >= 0 and density within [0, 1]")
    rng = _rng(seed)
    sizes = (n1, n2, n3)
    offs = np.cumsum((0,) + sizes)
    tracks = TrackLayout([range(int(offs[i]), int(offs[i + 1])) for i in range(3)])
    n = int(offs[-1])
    full = saturate(tracks, Graph(n)).graph
    edges = list(full.edges)
    keep_draw = rng.random(len(edges))
    keep = {e for e, x in zip(edges, keep_draw) if x < density}
    if connected and density > 0:
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for idx in rng.permutation(len(edges)):
            u, v = edges[int(idx)]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                keep.add((u, v))
    return Graph(n, sorted(keep)), tracks


def gen_random_staircase_3track(n1: int, n2: int, n3: int, seed: int) -> tuple[Graph, TrackLayout]:
    """Random saturated 3-track graph.

    For every track pair the edges form a uniformly shuffled monotone lattice
    path from the first pair of vertices to the last, which is exactly the
    shape of an edge-maximal non-crossing set between two ordered tracks.
    """
    if min(n1, n2, n3) < 0:
        raise ValueError("track sizes must be >= 0")
    rng = _rng(seed)
    sizes = (n1, n2, n3)
    offs = np.cumsum((0,) + sizes)
    tracks = [list(range(int(offs[i]), int(offs[i + 1]))) for i in range(3)]
    edges = []
    for a, b in ((0, 1), (1, 2), (0, 2)):
        if not tracks[a] or not tracks[b]:
            continue
        steps = np.array([0] * (len(tracks[a]) - 1) + [1] * (len(tracks[b]) - 1), dtype=int)
        rng.shuffle(steps)
        i = j = 0
        edges.append((tracks[a][0], tracks[b][0]))
        for step in steps:
            if step == 0:
                i += 1
            else:
                j += 1
            edges.append((tracks[a][i], tracks[b][j]))
    return Graph(int(offs[-1]), edges), TrackLayout(tracks)


def gen_outerplanar(n: int, seed: int) -> Graph:
    """Random maximal outerplanar graph: polygon ``0..n-1`` plus a random triangulation."""
    if n < 3:
        raise ValueError("outerplanar generator needs n >= 3")
    rng = _rng(seed)
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    poly = list(range(n))
    while len(poly) > 3:
        i = int(rng.integers(len(poly)))
        a, b = poly[i - 1], poly[(i + 1) % len(poly)]
        edges.add((min(a, b), max(a, b)))
        del poly[i]
    return Graph(n, sorted(edges))


def gen_random_layered(n: int, k: int, layers: int, density: float, seed: int) -> tuple[Graph, LayeredPathDecomposition]:
    """Random graph with a layered path decomposition of width at most ``k``.

    Each vertex gets a random level and a random interval of bag indices;
    intervals are rejected while some (bag, level) pair would hold more than
    ``k`` vertices. Edges are drawn among pairs that share a bag and whose
    levels differ by at most one.
    """
    if n < 1 or k < 1 or layers < 1:
        raise ValueError("need n, k, layers >= 1")
    rng = _rng(seed)
    nbags = max(1, n)
    load = np.zeros((nbags, layers), dtype=int)
    levels, spans = [], []
    for _ in range(n):
        for _attempt in range(200):
            lv = int(rng.integers(layers))
            a = int(rng.integers(nbags))
            b = min(nbags - 1, a + int(rng.integers(1 + max(1, nbags // 3))))
            if (load[a:b + 1, lv] < k).all():
                break
        else:
            # fall back to a fresh bag at the end
            load = np.vstack([load, np.zeros((1, layers), dtype=int)])
            nbags += 1
            lv, a, b = 0, nbags - 1, nbags - 1
        load[a:b + 1, lv] += 1
        levels.append(lv)
        spans.append((a, b))
    bags = [[v for v in range(n) if spans[v][0] <= i <= spans[v][1]] for i in range(nbags)]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            overlap = max(spans[u][0], spans[v][0]) <= min(spans[u][1], spans[v][1])
            if overlap and abs(levels[u] - levels[v]) <= 1 and rng.random() < density:
                edges.append((u, v))
    bags = [b for b in bags if b]
    return Graph(n, edges), LayeredPathDecomposition(PathDecomposition(bags), Layering(levels))


def manifest_entry(generator: str, params: dict, seed: int | None, doc: dict) -> dict:
    """Corpus manifest line: (generator, parameters, seed, content hash)."""
    return {"generator": generator, "params": params, "seed": seed,
            "format_version": FORMAT_VERSION, "sha256": content_hash(doc)}
