"""Weighted digraphs on bounded posets and exact Bellman-Ford.

The central objects are the digraphs Gamma(poset, prime_edges): nodes are the
elements of the bounded poset, every cover (i, j) contributes an up-edge
(i, j, -1), and each selected prime cover additionally contributes a down-edge
(j, i, +1).  A labeling b of the elements extends to such a graph exactly when
b_j >= b_i + 1 along every cover and b_i >= b_j - 1 along every down-edge, so
shortest-path potentials from the bottom node produce the minimal interior
cone point that is sharp on the prime edges, and a negative cycle certifies
that no such point exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    HasNegativeCycle,
    NotACover,
    NotInterior,
    UnknownElement,
)
from .posets import BOTTOM, TOP, BoundedPoset, FinitePoset, add_bounds


@dataclass(frozen=True)
class NegativeCycle:
    """Closed directed walk of negative total weight; first node repeated last."""

    nodes: tuple[str, ...]
    weight: int

    def __post_init__(self):
        if len(self.nodes) < 2 or self.nodes[0] != self.nodes[-1]:
            raise ValueError("cycle must be closed: first node repeated at the end")
        if self.weight >= 0:
            raise ValueError(f"cycle weight {self.weight} is not negative")

    def edge_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.nodes, self.nodes[1:]))

    def to_json(self) -> dict:
        return {"cycle": list(self.nodes), "weight": self.weight}


@dataclass(frozen=True)
class Potentials:
    """Exact shortest-path distances from the source; unreachable nodes absent."""

    source: str
    distances: tuple[tuple[str, int], ...]

    def distance(self, node: str) -> int | None:
        for name, d in self.distances:
            if name == node:
                return d
        return None

    def as_dict(self) -> dict[str, int]:
        return dict(self.distances)


@dataclass(frozen=True)
class ConePoint:
    """Integer point of the cone over the order polytope.

    coordinates maps each poset element to its label; height is the last
    coordinate.  interior records whether the labeling is strictly
    order-preserving with values in (0, height), which for integer points
    characterizes membership in the cone's interior.
    """

    coordinates: tuple[tuple[str, int], ...]
    height: int
    interior: bool

    def value(self, element: str) -> int:
        for name, v in self.coordinates:
            if name == element:
                return v
        raise UnknownElement(f"no coordinate for {element!r}")

    def as_dict(self) -> dict[str, int]:
        return dict(self.coordinates)

    def bounded_value(self, node: str) -> int:
        """Coordinate extended by 0 at the bottom and height at the top."""
        if node == BOTTOM:
            return 0
        if node == TOP:
            return self.height
        return self.value(node)

    def to_json(self) -> dict:
        return {"coords": dict(self.coordinates), "height": self.height}


def cone_point(poset: FinitePoset, values: dict[str, int], height: int) -> ConePoint:
    """Build a ConePoint in element order, computing the interior flag."""
    coords = tuple((e, int(values[e])) for e in poset.elements)
    interior = is_interior_labeling(poset, dict(coords), height)
    return ConePoint(coords, int(height), interior)


def is_interior_labeling(
    poset: FinitePoset, values: dict[str, int], height: int
) -> bool:
    """True iff 0 < x_i < height and x_i < x_j along every cover."""
    for e in poset.elements:
        v = values[e]
        if not 0 < v < height:
            return False
    for i, j in poset.covers:
        if values[j] < values[i] + 1:
            return False
    return True


def is_sharp(point: ConePoint, cover: tuple[str, str]) -> bool:
    """True iff the point increases by exactly 1 across the bounded cover."""
    i, j = cover
    return point.bounded_value(j) - point.bounded_value(i) == 1


class WeightedDigraph:
    """Digraph with string nodes and integer edge weights.

    Poset-derived instances keep a reference to their bounded poset so that
    the longest-chain augmentation can recover the cover structure; hand-built
    graphs (used by the exhaustive-path test oracle) leave it unset.
    """

    __slots__ = ("nodes", "edges", "bounded", "_index", "_arrays")

    def __init__(
        self,
        nodes: tuple[str, ...],
        edges: tuple[tuple[str, str, int], ...],
        bounded: BoundedPoset | None = None,
    ):
        seen = set()
        unique = []
        for e in edges:
            if e not in seen:
                seen.add(e)
                unique.append(e)
        self.nodes = tuple(nodes)
        self.edges = tuple(unique)
        self.bounded = bounded
        self._index = {v: k for k, v in enumerate(self.nodes)}
        if len(self._index) != len(self.nodes):
            raise ValueError("duplicate node names")
        for u, v, _ in self.edges:
            if u not in self._index or v not in self._index:
                raise UnknownElement(f"edge ({u!r}, {v!r}) uses an unknown node")
        self._arrays = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return self.nodes == other.nodes and set(self.edges) == set(other.edges)

    def __repr__(self) -> str:
        return (
            f"WeightedDigraph({len(self.nodes)} nodes, {len(self.edges)} edges)"
        )

    def up_edges(self) -> tuple[tuple[str, str, int], ...]:
        return tuple(e for e in self.edges if e[2] < 0)

    def down_edges(self) -> tuple[tuple[str, str, int], ...]:
        return tuple(e for e in self.edges if e[2] > 0)

    def down_covers(self) -> tuple[tuple[str, str], ...]:
        """Covers (i, j) whose down-edge (j, i, +1) is present."""
        return tuple((v, u) for u, v, w in self.edges if w > 0)

    def edge_arrays(self):
        if self._arrays is None:
            m = len(self.edges)
            eu = np.zeros(m, dtype=np.int64)
            ev = np.zeros(m, dtype=np.int64)
            ew = np.zeros(m, dtype=np.int64)
            for k, (u, v, w) in enumerate(self.edges):
                eu[k] = self._index[u]
                ev[k] = self._index[v]
                ew[k] = w
            self._arrays = (eu, ev, ew)
        return self._arrays


def _as_bounded(poset: FinitePoset) -> BoundedPoset:
    return poset if isinstance(poset, BoundedPoset) else add_bounds(poset)


def _sorted_covers(pairs) -> list[tuple[str, str]]:
    return sorted(set(pairs), key=lambda e: (e[0], e[1]))


def gamma(poset: FinitePoset, prime_edges=()) -> WeightedDigraph:
    """The digraph with up-edges on all bounded covers and selected down-edges.

    prime_edges are covers (i, j) of the bounded poset; each contributes the
    down-edge (j, i, +1).  With all covers selected this is the Hasse graph.
    """
    bounded = _as_bounded(poset)
    cover_set = set(bounded.covers)
    prime = []
    for edge in prime_edges:
        pair = (edge[0], edge[1])
        if pair not in cover_set:
            raise NotACover(f"{pair!r} is not a cover of the bounded poset")
        prime.append(pair)
    edges = [(i, j, -1) for i, j in bounded.covers]
    edges += [(j, i, 1) for i, j in _sorted_covers(prime)]
    return WeightedDigraph(bounded.elements, tuple(edges), bounded)


def hasse_graph(poset: FinitePoset) -> WeightedDigraph:
    """Up- and down-edges on every bounded cover."""
    bounded = _as_bounded(poset)
    return gamma(bounded, bounded.covers)


def gamma_b(poset: FinitePoset, point: ConePoint) -> WeightedDigraph:
    """The digraph of an interior cone point: down-edges where it is sharp.

    Interior down-edges appear on covers with b_j - b_i = 1, bottom edges
    (i, -inf, 1) where b_i = 1, and top edges (+inf, i, 1) where b_i attains
    the maximum coordinate.
    """
    bounded = _as_bounded(poset)
    base = bounded.base
    b = point.as_dict()
    if set(b) != set(base.elements):
        raise NotInterior("point coordinates do not match the poset elements")
    if not point.interior or not is_interior_labeling(base, b, point.height):
        raise NotInterior("point is not in the interior of the cone")
    top_value = max(b.values(), default=0)
    edges = [(i, j, -1) for i, j in bounded.covers]
    down = []
    for i, j in bounded.covers:
        if i == BOTTOM and j == TOP:
            if point.height == 1:
                down.append((TOP, BOTTOM))
        elif i == BOTTOM:
            if b[j] == 1:
                down.append((j, BOTTOM))
        elif j == TOP:
            if b[i] == top_value:
                down.append((TOP, i))
        elif b[j] - b[i] == 1:
            down.append((j, i))
    edges += [(u, v, 1) for u, v in _sorted_covers(down)]
    return WeightedDigraph(bounded.elements, tuple(edges), bounded)


def augment_with_longest_chains(
    graph: WeightedDigraph, bounded: BoundedPoset | None = None
) -> WeightedDigraph:
    """Union the graph's down-edges with those of all longest bounded chains."""
    if bounded is None:
        bounded = graph.bounded
    if bounded is None:
        raise ValueError("graph has no bounded poset attached; pass one explicitly")
    prime = set(graph.down_covers())
    prime.update(bounded.longest_chain_edges())
    return gamma(bounded, _sorted_covers(prime))


def bellman_ford(graph: WeightedDigraph, source: str) -> Potentials | NegativeCycle:
    """Exact shortest paths from source, or a reachable negative cycle."""
    if source not in graph._index:
        raise UnknownElement(f"unknown source node {source!r}")
    n = len(graph.nodes)
    eu, ev, ew = graph.edge_arrays()
    dist, pred, head = _kernels.bellman_ford_arrays(
        n, eu, ev, ew, graph._index[source]
    )
    if head < 0:
        pairs = tuple(
            (graph.nodes[k], int(dist[k])) for k in range(n) if dist[k] < _kernels.INF
        )
        return Potentials(source, pairs)
    # walk predecessors n times to land on the cycle, then splice it out
    at = int(head)
    for _ in range(n):
        at = int(pred[at])
    cycle = [at]
    cur = int(pred[at])
    while cur != at:
        cycle.append(cur)
        cur = int(pred[cur])
    cycle.append(at)
    cycle.reverse()  # predecessor order is against the edge direction
    weight_of = {}
    for u, v, w in graph.edges:
        key = (graph._index[u], graph._index[v])
        weight_of[key] = min(w, weight_of.get(key, w))
    total = sum(weight_of[(a, b)] for a, b in zip(cycle, cycle[1:]))
    names = tuple(graph.nodes[k] for k in cycle)
    if total >= 0:
        raise AssertionError(f"extracted cycle {names} has weight {total}")
    return NegativeCycle(names, total)


def has_negative_cycle(graph: WeightedDigraph, source: str = BOTTOM) -> bool:
    return isinstance(bellman_ford(graph, source), NegativeCycle)


def potentials_to_point(poset: FinitePoset, prime_edges=()) -> ConePoint:
    """Minimal interior cone point sharp along the given prime covers.

    Runs Bellman-Ford from the bottom on gamma(poset, prime_edges) and negates
    the distances.  Raises HasNegativeCycle when no such point exists.
    """
    bounded = _as_bounded(poset)
    graph = gamma(bounded, prime_edges)
    result = bellman_ford(graph, BOTTOM)
    if isinstance(result, NegativeCycle):
        raise HasNegativeCycle(
            f"gamma with prime edges {tuple(prime_edges)!r} has negative cycle "
            f"{result.nodes} of weight {result.weight}"
        )
    dist = result.as_dict()
    values = {e: -dist[e] for e in bounded.base.elements}
    point = cone_point(bounded.base, values, -dist[TOP])
    if not point.interior:
        raise AssertionError("potentials produced a non-interior point")
    for pair in prime_edges:
        if not is_sharp(point, (pair[0], pair[1])):
            raise AssertionError(f"potentials point is not sharp on {pair!r}")
    return point
