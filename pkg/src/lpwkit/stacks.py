"""Stack layouts from layered path decompositions.

Given a path decomposition of layered width ``k`` the construction orders the
vertices layer by layer (snaking through even and odd layers in opposite
directions) and colours every edge with a triple
``(parity of left endpoint's layer, slope bit, colour of left endpoint)``.
Edges that cross in the order never share a triple, so the triples are
stacks and at most ``4k`` are used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .core import Edge, Graph, Layering, PathDecomposition, StackLayout
from .errors import InternalAssertionError, PreconditionError
from .verify import layered_width, verify_layering, verify_path_decomposition, verify_stack_layout


@dataclass(frozen=True)
class LeftNormalDecomposition:
    """Path decomposition in which no two vertices share a first bag."""

    decomposition: PathDecomposition
    first_bag: dict[int, int]

    def order(self) -> list[int]:
        """Vertices sorted by first bag (the order written ``v <_B w``)."""
        return sorted(self.first_bag, key=self.first_bag.__getitem__)

    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order())}


class StackColour(NamedTuple):
    parity: int
    slope: int
    colour: int


def _require_valid(g: Graph, d: PathDecomposition, l: Layering) -> None:
    for verdict in (verify_path_decomposition(g, d), verify_layering(g, l)):
        if not verdict:
            raise PreconditionError(f"invalid layered path decomposition: {verdict.message}", verdict)


def _drop_degenerate(bags) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []
    for b in bags:
        if b and (not out or out[-1] != b):
            out.append(b)
    return out


def left_normalize(g: Graph, d: PathDecomposition, l: Layering) -> LeftNormalDecomposition:
    """Split bags so that vertices are introduced one at a time.

    When ``m > 1`` vertices first appear in bag ``B_i`` it is replaced by the
    ``m`` bags ``(B_{i-1} & B_i) | {first j new vertices}``; new vertices are
    introduced in increasing id order. Every new bag is a subset of ``B_i``,
    so the layered width cannot grow.
    """
    _require_valid(g, d, l)
    bags = _drop_degenerate(d.bags)
    out: list[frozenset[int]] = []
    prev: frozenset[int] = frozenset()
    for bag in bags:
        new = sorted(bag - prev)
        if len(new) <= 1:
            out.append(bag)
        else:
            keep = prev & bag
            for j in range(1, len(new) + 1):
                out.append(keep | frozenset(new[:j]))
        prev = bag
    out = _drop_degenerate(out)
    first: dict[int, int] = {}
    for i, bag in enumerate(out):
        for v in bag:
            first.setdefault(v, i)
    if len(set(first.values())) != len(first):
        raise InternalAssertionError("left normalization left two vertices with one first bag",
                                     {"bags": [sorted(b) for b in d.bags]})
    return LeftNormalDecomposition(PathDecomposition(out), first)


def snake_order(g: Graph, lnd: LeftNormalDecomposition, l: Layering) -> list[int]:
    """Vertex order: lower layers first; even layers ascend, odd layers descend in ``<_B``."""
    if l.s != 1:
        raise PreconditionError(f"snake order needs an ordinary layering, got s={l.s}")
    rank = lnd.rank()
    return sorted(g.vertices(), key=lambda v: (l[v], rank[v] if l[v] % 2 == 0 else -rank[v]))


def layer_local_colouring(g: Graph, lnd: LeftNormalDecomposition, l: Layering, k: int) -> dict[int, int]:
    """Colour vertices 1..k so that no bag holds two same-coloured vertices of one layer.

    Greedy interval colouring: vertices are taken in ``<_B`` order (i.e. by
    left end of their bag interval) and get the smallest colour not held by a
    still-open interval of the same layer.
    """
    spans = lnd.decomposition.intervals()
    open_by_layer: dict[int, list[int]] = {}
    colour: dict[int, int] = {}
    for v in lnd.order():
        start = spans[v][0]
        active = [w for w in open_by_layer.get(l[v], []) if spans[w][1] >= start]
        used = {colour[w] for w in active}
        c = 1
        while c in used:
            c += 1
        if c > k:
            raise InternalAssertionError(
                f"greedy colouring needed colour {c} > k={k}",
                {"bags": [sorted(b) for b in lnd.decomposition.bags], "levels": dict(l.levels)},
            )
        colour[v] = c
        active.append(v)
        open_by_layer[l[v]] = active
    return colour


def stack_colours(g: Graph, lnd: LeftNormalDecomposition, l: Layering, colour: dict[int, int]) -> dict[Edge, StackColour]:
    rank = lnd.rank()
    out = {}
    for u, w in g.edges:
        v, w2 = (u, w) if rank[u] < rank[w] else (w, u)
        slope = 1 if l[v] == l[w2] + 1 else 0
        out[(u, w)] = StackColour(l[v] % 2, slope, colour[v])
    return out


def build_stack_layout(g: Graph, d: PathDecomposition, l: Layering) -> StackLayout:
    """Stack layout with at most ``4k`` stacks, ``k`` the layered width of ``(d, l)``.

    Stack ids are the used colour triples compacted to ``0..used-1`` in sorted
    triple order.

    Raises:
        PreconditionError: if ``(d, l)`` is not a valid layered path
            decomposition of ``g`` with an ordinary layering.
        InternalAssertionError: if the result fails the stack verifier.
    """
    _require_valid(g, d, l)
    if l.s != 1:
        raise PreconditionError(f"stack construction needs an ordinary layering, got s={l.s}")
    lnd = left_normalize(g, d, l)
    order = snake_order(g, lnd, l)
    if g.m == 0:
        return StackLayout(order, {})
    k = layered_width(lnd.decomposition, l)
    colour = layer_local_colouring(g, lnd, l, k)
    triples = stack_colours(g, lnd, l, colour)
    ids = {t: i for i, t in enumerate(sorted(set(triples.values())))}
    layout = StackLayout(order, {e: ids[t] for e, t in triples.items()})
    verdict = verify_stack_layout(g, layout)
    if not verdict or layout.stack_count > 4 * k:
        raise InternalAssertionError(
            f"constructed stack layout rejected: {verdict.message or 'too many stacks'}",
            {"n": g.n, "edges": [list(e) for e in g.edges],
             "bags": [sorted(b) for b in d.bags], "levels": l.as_list(g.n)},
        )
    return layout
