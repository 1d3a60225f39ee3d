"""Exact brute-force oracles for tiny graphs.

These are ground truth for the constructions and never approximate: a query
over budget raises :class:`BudgetExceededError`.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .core import Graph, LayeredPathDecomposition, Layering, PathDecomposition, StackLayout, TrackLayout
from .errors import BudgetExceededError


def _popcount_table(n: int) -> np.ndarray:
    t = np.zeros(1 << n, dtype=np.int16)
    for v in range(n):
        t[1 << v:1 << (v + 1)] = t[:1 << v] + 1
    return t


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 8
    max_layer_span: int | None = None  # distinct level values; None means n
    time_limit: float = 600.0


class _Clock:
    def __init__(self, budget: OracleBudget):
        self.deadline = time.monotonic() + budget.time_limit

    def tick(self) -> None:
        if time.monotonic() > self.deadline:
            raise BudgetExceededError("oracle time limit exceeded")


def _check_size(g: Graph, budget: OracleBudget) -> None:
    if g.n > budget.max_vertices:
        raise BudgetExceededError(f"graph has {g.n} vertices, budget allows {budget.max_vertices}")


# --------------------------------------------------------------------------
# stack number
# --------------------------------------------------------------------------


def _orders(n: int) -> np.ndarray:
    """Vertex orders up to rotation and reflection (crossing is invariant under both)."""
    if n <= 2:
        return np.array([list(range(n))], dtype=np.int64)
    rows = [(0,) + p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]]
    return np.array(rows, dtype=np.int64)


def _colourable(adj: list[int], k: int) -> list[int] | None:
    """Backtracking k-colouring of a graph given as neighbour bitmasks."""
    m = len(adj)
    order = sorted(range(m), key=lambda i: -bin(adj[i]).count("1"))
    colour = [-1] * m

    def go(pos: int) -> bool:
        if pos == m:
            return True
        v = order[pos]
        used = {colour[u] for u in range(m) if adj[v] >> u & 1 and colour[u] >= 0}
        top = max(colour) + 1 if pos else 0
        for c in range(min(k, top + 1)):
            if c not in used:
                colour[v] = c
                if go(pos + 1):
                    return True
        colour[v] = -1
        return False

    return list(colour) if go(0) else None


def exact_stack_number(g: Graph, budget: OracleBudget = OracleBudget(), witness: bool = False):
    """Minimum number of stacks over all vertex orders.

    For each order the edges' crossing-conflict graph is coloured by
    backtracking; the answer is the smallest ``k`` for which some order admits
    a ``k``-colouring. Starts from the bound ``m <= n + k(n - 3)``.

    Returns the stack number, or ``(value, StackLayout)`` when ``witness``.
    """
    _check_size(g, budget)
    clock = _Clock(budget)
    if g.m == 0:
        return (0, StackLayout(range(g.n), {})) if witness else 0
    n, edges = g.n, g.edges
    orders = _orders(n)
    pos = np.argsort(orders, axis=1)
    eu = np.array([e[0] for e in edges])
    ev = np.array([e[1] for e in edges])
    a = np.minimum(pos[:, eu], pos[:, ev])
    b = np.maximum(pos[:, eu], pos[:, ev])
    A1, A2 = a[:, :, None], a[:, None, :]
    B1, B2 = b[:, :, None], b[:, None, :]
    cross = ((A1 < A2) & (A2 < B1) & (B1 < B2)) | ((A2 < A1) & (A1 < B2) & (B2 < B1))
    weights = (1 << np.arange(len(edges), dtype=object))
    lower = 1
    if n > 3:
        lower = max(1, math.ceil((g.m - n) / (n - 3)))
    k = lower
    while True:
        clock.tick()
        for p in range(len(orders)):
            if k == 1:
                if cross[p].any():
                    continue
                colouring = [0] * len(edges)
            else:
                adj = [int(row.astype(object) @ weights) for row in cross[p]]
                colouring = _colourable(adj, k)
                if colouring is None:
                    continue
            if witness:
                layout = StackLayout(orders[p].tolist(), dict(zip(edges, colouring)))
                return k, layout
            return k
        k += 1


# --------------------------------------------------------------------------
# layered pathwidth
# --------------------------------------------------------------------------


def _components(g: Graph) -> list[list[int]]:
    seen, comps = set(), []
    for r in range(g.n):
        if r in seen:
            continue
        comp, stack = [], [r]
        seen.add(r)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _layerings(n: int, adj: list[int], s: int, span: int, clock: _Clock) -> np.ndarray:
    """All layerings of a connected graph with vertex 0 on level 0 and |dl| <= s on edges."""
    order, seen = [0], {0}
    for v in order:
        for w in range(n):
            if adj[v] >> w & 1 and w not in seen:
                seen.add(w)
                order.append(w)
    out = []
    levels = [0] * n

    def go(i: int, lo: int, hi: int) -> None:
        if i == n:
            out.append(list(levels))
            if len(out) % 4096 == 0:
                clock.tick()
            return
        v = order[i]
        a, b = -10**9, 10**9
        for w in order[:i]:
            if adj[v] >> w & 1:
                a, b = max(a, levels[w] - s), min(b, levels[w] + s)
        for x in range(a, b + 1):
            nlo, nhi = min(lo, x), max(hi, x)
            if nhi - nlo + 1 > span:
                continue
            levels[v] = x
            go(i + 1, nlo, nhi)

    go(1, 0, 0)
    arr = np.array(out, dtype=np.int64)
    return arr - arr.min(axis=1, keepdims=True)


def _component_lpw(n: int, adj: list[int], s: int, span: int, clock: _Clock):
    """Exact (width, levels, vertex order) for one connected component."""
    full = (1 << n) - 1
    subsets = np.arange(1 << n)
    # boundary(S): vertices of S with a neighbour outside S
    boundary = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        has_out = np.array([(adj[v] & ~S & full) != 0 for S in range(1 << n)])
        boundary |= np.where(((subsets >> v) & 1).astype(bool) & has_out, 1 << v, 0)
    bag = boundary[:, None] | (1 << np.arange(n))[None, :]  # (2^n, n)

    popcount = _popcount_table(n)
    lays = _layerings(n, adj, s, span, clock)
    L = lays.shape[0]
    depth = int(lays.max()) + 1
    masks = np.zeros((L, depth), dtype=np.int64)
    for v in range(n):
        masks[np.arange(L), lays[:, v]] |= 1 << v
    cost = np.zeros((L, 1 << n, n), dtype=np.int16)
    for d in range(depth):
        inter = bag[None, :, :] & masks[:, d][:, None, None]
        np.maximum(cost, popcount[inter], out=cost)
    clock.tick()

    INF = np.int16(100)
    f = np.full((L, 1 << n), INF, dtype=np.int16)
    f[:, 0] = 0
    for S in range(1 << n):
        fs = f[:, S]
        for v in range(n):
            if S >> v & 1:
                continue
            T = S | (1 << v)
            np.minimum(f[:, T], np.maximum(fs, cost[:, S, v]), out=f[:, T])
    best_q = int(np.argmin(f[:, full]))
    width = int(f[best_q, full])
    # reconstruct an order for the best layering
    order, S = [], 0
    while S != full:
        for v in range(n):
            if not S >> v & 1:
                T = S | (1 << v)
                if f[best_q, T] <= width and max(f[best_q, S], cost[best_q, S, v]) <= width and _reaches(
                    f[best_q], cost[best_q], T, width, n, full
                ):
                    order.append(v)
                    S = T
                    break
    return width, lays[best_q].tolist(), order


def _reaches(fq, cq, S, width, n, full, _memo=None) -> bool:
    # forward feasibility: can S be extended to the full set without exceeding width
    if _memo is None:
        _memo = {}
    if S == full:
        return True
    if S in _memo:
        return _memo[S]
    ok = False
    for v in range(n):
        if not S >> v & 1 and cq[S, v] <= width and _reaches(fq, cq, S | (1 << v), width, n, full, _memo):
            ok = True
            break
    _memo[S] = ok
    return ok


def _order_bags(order: list[int], adj: list[int]) -> list[list[int]]:
    bags = []
    for i, v in enumerate(order):
        later = set(order[i:])
        bag = [u for u in order[:i] if any(adj[u] >> w & 1 for w in later)] + [v]
        bags.append(bag)
    return bags


def optimal_layered_path_decomposition(g: Graph, s: int = 1, budget: OracleBudget = OracleBudget()) -> LayeredPathDecomposition:
    """A layered path decomposition of minimum width (with an ``s``-weak layering).

    Per connected component: enumerate layerings (first vertex on level 0,
    edges spanning at most ``s`` levels), and for each run a subset dynamic
    program over vertex orders whose bag at step ``i`` is ``{v_i}`` plus the
    earlier vertices with a neighbour at or after ``v_i``. Every path
    decomposition can be turned into such an order without growing any
    bag-layer intersection, so the minimum is exact. Components are laid out
    one after another.
    """
    _check_size(g, budget)
    clock = _Clock(budget)
    span = budget.max_layer_span or max(g.n, 1)
    levels = [0] * g.n
    bags: list[list[int]] = []
    for comp in _components(g):
        idx = {v: i for i, v in enumerate(comp)}
        adj = [sum(1 << idx[w] for w in g.neighbours(v)) for v in comp]
        if len(comp) == 1:
            bags.append([comp[0]])
            continue
        _, lv, order = _component_lpw(len(comp), adj, s, span, clock)
        for v in comp:
            levels[v] = lv[idx[v]]
        bags += [[comp[i] for i in b] for b in _order_bags(order, adj)]
    return LayeredPathDecomposition(PathDecomposition(bags), Layering(levels, s))


def exact_layered_pathwidth(g: Graph, budget: OracleBudget = OracleBudget()) -> int:
    return exact_weak_layered_pathwidth(g, 1, budget)


def exact_weak_layered_pathwidth(g: Graph, s: int, budget: OracleBudget = OracleBudget()) -> int:
    """Minimum layered width over all ``s``-weak layered path decompositions."""
    _check_size(g, budget)
    if g.n == 0:
        return 0
    clock = _Clock(budget)
    span = budget.max_layer_span or g.n
    best = 1
    for comp in _components(g):
        if len(comp) == 1:
            continue
        idx = {v: i for i, v in enumerate(comp)}
        adj = [sum(1 << idx[w] for w in g.neighbours(v)) for v in comp]
        w, _, _ = _component_lpw(len(comp), adj, s, span, clock)
        best = max(best, w)
    return best


# --------------------------------------------------------------------------
# 3-track layouts
# --------------------------------------------------------------------------


def _extend_orders(parts: list[list[int]], fixed: list[tuple[int, ...]], g: Graph, clock: _Clock):
    """Order the remaining tracks one vertex at a time, pruning X-crossings.

    Appending ``w`` to a track is safe against an already ordered track iff
    every neighbour of ``w`` there lies at or after the furthest neighbour of
    the vertices placed before ``w``.
    """
    t = len(fixed)
    if t == len(parts):
        return fixed
    pos = [{v: i for i, v in enumerate(p)} for p in fixed]
    nbr = {w: [[pos[j][x] for x in g.neighbours(w) if x in pos[j]] for j in range(t)] for w in parts[t]}
    order: list[int] = []
    reach = [-1] * t
    left = set(parts[t])

    def go():
        clock.tick()
        if not left:
            return _extend_orders(parts, fixed + [tuple(order)], g, clock)
        for w in sorted(left):
            if any(ns and min(ns) < reach[j] for j, ns in enumerate(nbr[w])):
                continue
            saved = list(reach)
            for j, ns in enumerate(nbr[w]):
                if ns:
                    reach[j] = max(reach[j], max(ns))
            order.append(w)
            left.discard(w)
            found = go()
            if found is not None:
                return found
            left.add(w)
            order.pop()
            reach[:] = saved
        return None

    return go()


def has_3track_layout(g: Graph, budget: OracleBudget = OracleBudget()) -> TrackLayout | None:
    """A 3-track layout of ``g`` if one exists, found by exhaustive search.

    Tracks are assigned with symmetry breaking (a new track index is opened
    only in increasing order). For each proper 3-colouring the first track is
    tried in every order up to reversal and the other two are ordered by a
    pruned depth-first search.
    """
    _check_size(g, budget)
    clock = _Clock(budget)
    n = g.n
    track = [-1] * n

    def orders_for(parts: list[list[int]]) -> TrackLayout | None:
        for p0 in itertools.permutations(parts[0]):
            if len(p0) >= 2 and p0[0] > p0[-1]:
                continue
            found = _extend_orders(parts, [p0], g, clock)
            if found is not None:
                return TrackLayout(found)
        return None

    def assign(v: int, opened: int) -> TrackLayout | None:
        if v == n:
            parts = [[u for u in range(n) if track[u] == t] for t in range(3)]
            return orders_for(parts)
        for t in range(min(3, opened + 1)):
            if any(track[w] == t for w in g.neighbours(v) if w < v):
                continue
            track[v] = t
            found = assign(v + 1, max(opened, t + 1))
            if found is not None:
                return found
        track[v] = -1
        return None

    return assign(0, 0)
