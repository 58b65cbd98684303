"""Exhaustive and randomized poset generation for cross-checking.

The exhaustive catalog enumerates every partial order on n labeled elements
whose relations are compatible with the natural order of the labels, i.e.
all transitively closed subsets of {(i, j) : i < j}.  Every poset is
isomorphic to one generated this way (relabel along a linear extension), so
the catalog is exhaustive up to isomorphism while staying cheap to produce.

Random posets come from the same representation with each upper-triangle
pair included independently, then closed transitively.  Instances whose
bounded poset has too many covers are rejected so that downstream subset
enumeration stays within its budget.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator

from .posets import FinitePoset, add_bounds, from_covers

CATALOG_COUNTS = (1, 1, 2, 7, 40, 357)

BOUNDED_COVER_CAP = 18


def _closure(n: int, rel: set[tuple[int, int]]) -> set[tuple[int, int]]:
    """Transitive closure of a relation on 0..n-1 whose pairs go upward."""
    closed = set(rel)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(tuple(closed), repeat=2):
            if b == c and (a, d) not in closed:
                closed.add((a, d))
                changed = True
    return closed


def _reduction(rel: set[tuple[int, int]]) -> list[tuple[int, int]]:
    """Covers of a transitively closed relation."""
    return sorted(
        (a, b)
        for a, b in rel
        if not any((a, c) in rel and (c, b) in rel for c in range(a + 1, b))
    )


def _build(n: int, rel: set[tuple[int, int]]) -> FinitePoset:
    elements = [str(i + 1) for i in range(n)]
    covers = [(elements[a], elements[b]) for a, b in _reduction(rel)]
    return from_covers(elements, covers)


def all_posets(n: int) -> Iterator[FinitePoset]:
    """Every poset on n elements, one representative per natural labeling."""
    if n < 0:
        raise ValueError("poset size must be nonnegative")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        rel = {pairs[t] for t in range(len(pairs)) if bits >> t & 1}
        is_closed = all(
            (a, d) in rel
            for (a, b), (c, d) in itertools.product(rel, repeat=2)
            if b == c
        )
        if is_closed:
            yield _build(n, rel)


def catalog(max_size: int) -> list[FinitePoset]:
    """All posets with at most max_size elements, smallest first."""
    return [p for n in range(max_size + 1) for p in all_posets(n)]


def random_poset(
    size: int, seed: int, cover_cap: int = BOUNDED_COVER_CAP
) -> FinitePoset:
    """Seeded random poset whose bounded poset has at most cover_cap covers."""
    if size < 0:
        raise ValueError("poset size must be nonnegative")
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    while True:
        density = rng.uniform(0.2, 0.6)
        rel = _closure(size, {p for p in pairs if rng.random() < density})
        poset = _build(size, rel)
        if len(add_bounds(poset).covers) <= cover_cap:
            return poset
