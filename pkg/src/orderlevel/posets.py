"""Finite posets, their bounded extensions, and basic enumeration.

Elements are opaque string identifiers mapped to dense indices in declared
order.  A poset is built from its covers (the Hasse diagram); the declared
covers must be exactly the transitive reduction, so redundant covers and
cycles are rejected at construction time.

The bounded extension adjoins a bottom ``-inf`` and a top ``+inf``; those two
identifiers are reserved and cannot name ordinary elements.  Rank of an
interval [i, j] is the number of edges of a longest chain from i to j,
computed by dynamic programming over a topological order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import (
    CycleDetected,
    IdentifierCollision,
    NotComparable,
    RedundantCover,
    UnknownElement,
)

BOTTOM = "-inf"
TOP = "+inf"
_RESERVED = (BOTTOM, TOP)


class FinitePoset:
    """Immutable finite poset given by elements and covering relations.

    Use :func:`from_covers` (or the other constructors) rather than calling
    this class directly; the constructor assumes already-validated input.
    """

    __slots__ = (
        "elements",
        "covers",
        "_index",
        "_leq",
        "_topo",
        "_up",
        "_down",
        "_rank_cache",
    )

    def __init__(
        self,
        elements: tuple[str, ...],
        covers: tuple[tuple[str, str], ...],
        leq: np.ndarray,
        topo: tuple[int, ...],
        up: tuple[tuple[int, ...], ...],
        down: tuple[tuple[int, ...], ...],
    ):
        self.elements = elements
        self.covers = covers
        self._index = {e: k for k, e in enumerate(elements)}
        self._leq = leq
        self._topo = topo
        self._up = up
        self._down = down
        self._rank_cache: dict[int, np.ndarray] = {}

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and set(self.covers) == set(other.covers)

    def __hash__(self) -> int:
        return hash((self.elements, frozenset(self.covers)))

    def __repr__(self) -> str:
        return f"FinitePoset(elements={list(self.elements)!r}, covers={list(self.covers)!r})"

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise UnknownElement(f"unknown element {element!r}") from None

    def leq(self, i: str, j: str) -> bool:
        """True iff i <= j in the poset (reflexive)."""
        return bool(self._leq[self.index(i), self.index(j)])

    def less(self, i: str, j: str) -> bool:
        """True iff i < j strictly."""
        a, b = self.index(i), self.index(j)
        return a != b and bool(self._leq[a, b])

    def leq_matrix(self) -> np.ndarray:
        """Read-only reflexive comparability matrix in index order."""
        view = self._leq.view()
        view.flags.writeable = False
        return view

    def upper_covers(self, element: str) -> tuple[str, ...]:
        return tuple(self.elements[k] for k in self._up[self.index(element)])

    def lower_covers(self, element: str) -> tuple[str, ...]:
        return tuple(self.elements[k] for k in self._down[self.index(element)])

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(e for k, e in enumerate(self.elements) if not self._down[k])

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(e for k, e in enumerate(self.elements) if not self._up[k])

    def topological_order(self) -> tuple[str, ...]:
        return tuple(self.elements[k] for k in self._topo)

    def strict_pairs(self) -> tuple[tuple[str, str], ...]:
        """All pairs (i, j) with i < j, in element-index order."""
        out = []
        n = len(self.elements)
        for a in range(n):
            for b in range(n):
                if a != b and self._leq[a, b]:
                    out.append((self.elements[a], self.elements[b]))
        return tuple(out)

    # -- interval rank ----------------------------------------------------

    def rank_interval(self, i: str, j: str) -> int:
        """Number of edges of a longest chain from i to j inside [i, j].

        Raises NotComparable unless i <= j.
        """
        a, b = self.index(i), self.index(j)
        if not self._leq[a, b]:
            raise NotComparable(f"{i!r} is not below {j!r}")
        return int(self._ranks_from(a)[b])

    def _ranks_from(self, a: int) -> np.ndarray:
        """Longest-path edge counts from index a to every index above it (-1 below)."""
        cached = self._rank_cache.get(a)
        if cached is not None:
            return cached
        dist = np.full(len(self.elements), -1, dtype=np.int64)
        dist[a] = 0
        for u in self._topo:
            if dist[u] < 0:
                continue
            for v in self._up[u]:
                if dist[u] + 1 > dist[v]:
                    dist[v] = dist[u] + 1
        self._rank_cache[a] = dist
        return dist

    # -- subset enumeration ------------------------------------------------

    def filters(self) -> list[tuple[frozenset[str], tuple[int, ...]]]:
        """All upward-closed subsets with 0/1 indicator vectors.

        Deterministic order: depth-first over elements in reverse topological
        order, excluding before including, so the empty filter comes first and
        the full set last.  Intended for small posets (|elements| <= ~20).
        """
        order = list(reversed(self._topo))
        n = len(self.elements)
        member = [False] * n
        out: list[tuple[frozenset[str], tuple[int, ...]]] = []

        def rec(pos: int) -> None:
            if pos == n:
                chosen = frozenset(self.elements[k] for k in range(n) if member[k])
                out.append((chosen, tuple(1 if member[k] else 0 for k in range(n))))
                return
            e = order[pos]
            member[e] = False
            rec(pos + 1)
            if all(member[v] for v in self._up[e]):
                member[e] = True
                rec(pos + 1)
                member[e] = False

        rec(0)
        return out

    def _filter_masks(self) -> np.ndarray:
        """Filters as int64 bitmasks over element indices (same order as filters())."""
        masks = []
        for _, indicator in self.filters():
            m = 0
            for k, bit in enumerate(indicator):
                if bit:
                    m |= 1 << k
            masks.append(m)
        return np.asarray(masks, dtype=np.int64)

    def antichains(self) -> list[tuple[frozenset[str], tuple[int, ...]]]:
        """All antichains with indicator vectors, in depth-first index order."""
        n = len(self.elements)
        chosen: list[int] = []
        out: list[tuple[frozenset[str], tuple[int, ...]]] = []

        def emit() -> None:
            sel = frozenset(self.elements[k] for k in chosen)
            out.append((sel, tuple(1 if k in chosen else 0 for k in range(n))))

        def rec(start: int) -> None:
            emit()
            for k in range(start, n):
                if all(not (self._leq[c, k] or self._leq[k, c]) for c in chosen):
                    chosen.append(k)
                    rec(k + 1)
                    chosen.pop()

        rec(0)
        return out

    def connected_components(self) -> list["FinitePoset"]:
        """Components of the comparability graph, as posets on the original labels.

        Ordered by first element index; each component keeps the declared
        element order and the induced covers.
        """
        n = len(self.elements)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.covers:
            ra, rb = find(self._index[a]), find(self._index[b])
            if ra != rb:
                parent[ra] = rb
        groups: dict[int, list[int]] = {}
        for k in range(n):
            groups.setdefault(find(k), []).append(k)
        comps = sorted(groups.values(), key=lambda g: g[0])
        out = []
        for g in comps:
            keep = set(g)
            elems = tuple(self.elements[k] for k in sorted(keep))
            covs = tuple(
                (a, b) for a, b in self.covers if self._index[a] in keep
            )
            out.append(from_covers(elems, covs))
        return out


# -- construction ---------------------------------------------------------


def _toposort(n: int, up: list[list[int]], down: list[list[int]]) -> tuple[int, ...]:
    indeg = [len(d) for d in down]
    heap = [k for k in range(n) if indeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in up[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != n:
        stuck = [k for k in range(n) if indeg[k] > 0]
        raise CycleDetected(f"covers contain a directed cycle through indices {stuck}")
    return tuple(order)


def from_covers(
    elements,
    covers,
    _allow_reserved: bool = False,
) -> FinitePoset:
    """Build a poset from element identifiers and covering pairs.

    Validates: unique non-reserved identifiers, covers over known elements,
    acyclicity, and that every declared cover is a genuine cover (not
    transitively implied by the others).
    """
    elements = tuple(elements)
    seen = set()
    for e in elements:
        if not isinstance(e, str) or not e:
            raise UnknownElement(f"element identifiers must be non-empty strings, got {e!r}")
        if not _allow_reserved and e in _RESERVED:
            raise IdentifierCollision(f"identifier {e!r} is reserved for the bounded poset")
        if e in seen:
            raise IdentifierCollision(f"duplicate element identifier {e!r}")
        seen.add(e)
    index = {e: k for k, e in enumerate(elements)}

    n = len(elements)
    covers = tuple((a, b) for a, b in covers)
    up: list[list[int]] = [[] for _ in range(n)]
    down: list[list[int]] = [[] for _ in range(n)]
    edge_set = set()
    for a, b in covers:
        if a not in index:
            raise UnknownElement(f"cover endpoint {a!r} is not an element")
        if b not in index:
            raise UnknownElement(f"cover endpoint {b!r} is not an element")
        if a == b:
            raise CycleDetected(f"self-loop cover ({a!r}, {b!r})")
        if (a, b) in edge_set:
            raise RedundantCover(f"cover ({a!r}, {b!r}) declared twice")
        edge_set.add((a, b))
        up[index[a]].append(index[b])
        down[index[b]].append(index[a])

    topo = _toposort(n, up, down)

    leq = np.eye(n, dtype=bool)
    for u in reversed(topo):
        for v in up[u]:
            leq[u] |= leq[v]

    for a, b in covers:
        ia, ib = index[a], index[b]
        between = leq[ia] & leq[:, ib]
        between[ia] = between[ib] = False
        if between.any():
            w = elements[int(np.flatnonzero(between)[0])]
            raise RedundantCover(
                f"cover ({a!r}, {b!r}) is implied transitively (via {w!r})"
            )

    return FinitePoset(
        elements,
        covers,
        leq,
        topo,
        tuple(tuple(u) for u in up),
        tuple(tuple(d) for d in down),
    )


def chain(size: int) -> FinitePoset:
    """Chain on identifiers "1".."size"."""
    elems = tuple(str(k) for k in range(1, size + 1))
    covs = tuple((str(k), str(k + 1)) for k in range(1, size))
    return from_covers(elems, covs)


def antichain(size: int) -> FinitePoset:
    """Antichain on identifiers "1".."size"."""
    return from_covers(tuple(str(k) for k in range(1, size + 1)), ())


def _freshen(name: str, taken: set[str]) -> str:
    # rename scheme for collisions: append ~2, ~3, ... until fresh
    k = 2
    while f"{name}~{k}" in taken or f"{name}~{k}" in _RESERVED:
        k += 1
    return f"{name}~{k}"


def _merge_labels(
    p1: FinitePoset, p2: FinitePoset, rename_on_collision: bool
) -> tuple[dict[str, str], tuple[str, ...]]:
    taken = set(p1.elements)
    mapping: dict[str, str] = {}
    for e in p2.elements:
        if e in taken:
            if not rename_on_collision:
                raise IdentifierCollision(
                    f"element {e!r} appears in both posets (pass rename_on_collision=True)"
                )
            mapping[e] = _freshen(e, taken)
        else:
            mapping[e] = e
        taken.add(mapping[e])
    elements = p1.elements + tuple(mapping[e] for e in p2.elements)
    return mapping, elements


def ordinal_sum(
    p1: FinitePoset, p2: FinitePoset, rename_on_collision: bool = False
) -> FinitePoset:
    """Ordinal sum: everything in p1 below everything in p2.

    Covers are the covers of each summand plus (maximal of p1) x (minimal of
    p2).  Colliding identifiers in p2 are renamed with a "~2" suffix scheme
    when rename_on_collision is set, and rejected otherwise.
    """
    mapping, elements = _merge_labels(p1, p2, rename_on_collision)
    covers = list(p1.covers)
    covers += [(mapping[a], mapping[b]) for a, b in p2.covers]
    covers += [
        (m, mapping[w]) for m in p1.maximal_elements() for w in p2.minimal_elements()
    ]
    return from_covers(elements, covers)


def disjoint_union(
    p1: FinitePoset, p2: FinitePoset, rename_on_collision: bool = False
) -> FinitePoset:
    """Disjoint union with no relations across the parts."""
    mapping, elements = _merge_labels(p1, p2, rename_on_collision)
    covers = list(p1.covers) + [(mapping[a], mapping[b]) for a, b in p2.covers]
    return from_covers(elements, covers)


# -- bounded extension ----------------------------------------------------


class BoundedPoset(FinitePoset):
    """A poset with adjoined bottom ``-inf`` and top ``+inf``.

    Inherits all poset queries; adds the height/depth/rank vocabulary that
    only makes sense with bounds present.
    """

    __slots__ = ("base",)

    bottom = BOTTOM
    top = TOP

    def height(self, element: str) -> int:
        """Longest-chain edge count from the bottom to the element."""
        return self.rank_interval(BOTTOM, element)

    def depth(self, element: str) -> int:
        """Longest-chain edge count from the element to the top."""
        return self.rank_interval(element, TOP)

    def rank(self) -> int:
        """Longest-chain edge count from bottom to top."""
        return self.rank_interval(BOTTOM, TOP)

    def longest_chain_edges(self) -> tuple[tuple[str, str], ...]:
        """Covers lying on some maximum-length chain from bottom to top.

        A cover (u, v) qualifies iff height(u) + 1 + depth(v) equals the rank.
        Returned in the declared cover order.
        """
        r = self.rank()
        return tuple(
            (u, v)
            for u, v in self.covers
            if self.height(u) + 1 + self.depth(v) == r
        )


def add_bounds(poset: FinitePoset) -> BoundedPoset:
    """Adjoin ``-inf`` below and ``+inf`` above every element."""
    if isinstance(poset, BoundedPoset):
        return poset
    elements = (BOTTOM,) + poset.elements + (TOP,)
    covers = list(poset.covers)
    covers += [(BOTTOM, m) for m in poset.minimal_elements()]
    covers += [(m, TOP) for m in poset.maximal_elements()]
    if not poset.elements:
        covers.append((BOTTOM, TOP))
    proto = from_covers(elements, covers, _allow_reserved=True)
    bounded = BoundedPoset(
        proto.elements, proto.covers, proto._leq, proto._topo, proto._up, proto._down
    )
    bounded.base = poset
    return bounded


# -- JSON wire format -----------------------------------------------------


def poset_to_json(poset: FinitePoset) -> dict:
    return {
        "elements": list(poset.elements),
        "covers": [[a, b] for a, b in poset.covers],
    }


def poset_from_json(doc: dict) -> FinitePoset:
    if not isinstance(doc, dict) or "elements" not in doc or "covers" not in doc:
        raise UnknownElement('poset JSON must have "elements" and "covers" keys')
    return from_covers(
        tuple(doc["elements"]), tuple((a, b) for a, b in doc["covers"])
    )


@dataclass(frozen=True)
class PosetStats:
    """Small summary used by the CLI report."""

    size: int
    cover_count: int
    rank: int

    @staticmethod
    def of(poset: FinitePoset) -> "PosetStats":
        return PosetStats(len(poset), len(poset.covers), add_bounds(poset).rank())
