"""Levelness deciders for order polytopes, with re-checkable certificates.

Three independent methods are provided.  check_level_subsets scans every
selection of bounded covers, asking whether adding down-edges along all
longest chains can create a negative cycle where none existed; a hit is a
certificate of non-levelness that two Bellman-Ford runs re-verify.
check_level_miyazaki enumerates zigzag sequences with condition N and
compares their maximal r-value against the codegree.  check_level_bruteforce
enumerates the interior cone points up to height d + 1 and tests each for a
decomposition into a height-r interior point plus a cone point.  All three
agree on every input; check_level runs any subset of them and raises on
disagreement.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .digraph import (
    ConePoint,
    NegativeCycle,
    Potentials,
    WeightedDigraph,
    augment_with_longest_chains,
    bellman_ford,
    cone_point,
    gamma,
    is_interior_labeling,
    is_sharp,
    potentials_to_point,
)
from .ehrhart import codegree_via_rank, interior_points, omega_strict
from .errors import (
    BudgetExceeded,
    CheckerDisagreement,
    ConditionViolated,
    NotACover,
)
from .posets import BOTTOM, TOP, BoundedPoset, FinitePoset, add_bounds

LEVEL = "LEVEL"
NOT_LEVEL = "NOT_LEVEL"

SUBSET_BUDGET_BITS = 22
SEQUENCE_BUDGET = 1_000_000
LEAF_BUDGET = 200_000_000

# pairwise decomposition scan is preferred while the candidate set is small
_PAIRWISE_CANDIDATE_CAP = 512


@dataclass(frozen=True)
class ConditionNSequence:
    """Zigzag (i_1, j_1), ..., (i_t, j_t); the empty sequence is allowed."""

    pairs: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def to_json(self) -> list[list[str]]:
        return [[i, j] for i, j in self.pairs]


@dataclass(frozen=True)
class LevelnessCertificate:
    """Verdict with enough data to re-validate it independently."""

    verdict: str
    method: str
    r: int
    r_max: int | None = None
    prime_edges: tuple[tuple[str, str], ...] | None = None
    negative_cycle: NegativeCycle | None = None
    sequence: ConditionNSequence | None = None
    witness_point: ConePoint | None = None

    @property
    def level(self) -> bool:
        return self.verdict == LEVEL

    def to_json(self) -> dict:
        doc: dict = {"level": self.level, "method": self.method, "r": self.r}
        if self.r_max is not None:
            doc["r_max"] = self.r_max
        if self.prime_edges is not None:
            doc["prime_edges"] = [[i, j] for i, j in self.prime_edges]
        if self.negative_cycle is not None:
            doc["negative_cycle"] = self.negative_cycle.to_json()
        if self.sequence is not None:
            doc["sequence"] = self.sequence.to_json()
        if self.witness_point is not None:
            doc["witness_point"] = self.witness_point.to_json()
        return doc


# -- condition-N sequences ----------------------------------------------------


def check_condition_n(poset: FinitePoset, pairs) -> bool:
    """True iff the pair sequence satisfies both zigzag clauses."""
    pairs = [(i, j) for i, j in pairs]
    for i, j in pairs:
        if not poset.less(i, j):
            return False
    for s in range(1, len(pairs)):
        if not poset.less(pairs[s][0], pairs[s - 1][1]):
            return False
    for m in range(len(pairs)):
        for n in range(m + 1, len(pairs)):
            if poset.leq(pairs[m][0], pairs[n][1]):
                return False
    return True


def enumerate_condition_n(poset: FinitePoset, budget: int = SEQUENCE_BUDGET):
    """Yield every condition-N sequence, the empty one first, depth-first.

    Candidate pairs extend in element-index order, so the stream is
    deterministic.  Termination is guaranteed because clause (2) forbids
    reusing any i-element.  Raises BudgetExceeded past the sequence budget.
    """
    elements = poset.elements
    n = len(elements)
    leq = poset.leq_matrix()
    pairs = [
        (a, b) for a in range(n) for b in range(n) if a != b and leq[a, b]
    ]
    emitted = 0

    def make(stack) -> ConditionNSequence:
        return ConditionNSequence(
            tuple((elements[a], elements[b]) for a, b in stack)
        )

    def bump():
        nonlocal emitted
        emitted += 1
        if emitted > budget:
            raise BudgetExceeded(
                f"more than {budget} condition-N sequences; raise the budget"
            )

    bump()
    yield ConditionNSequence(())

    stack: list[tuple[int, int]] = []

    def extend():
        last_j = stack[-1][1] if stack else None
        for a, b in pairs:
            if last_j is not None and not (a != last_j and leq[a, last_j]):
                continue
            # clause (2): no earlier i may lie below the new j
            if any(leq[i0, b] for i0, _ in stack):
                continue
            stack.append((a, b))
            bump()
            yield make(stack)
            yield from extend()
            stack.pop()

    yield from extend()


def _pairs_of(seq) -> tuple[tuple[str, str], ...]:
    if isinstance(seq, ConditionNSequence):
        return seq.pairs
    return tuple((i, j) for i, j in seq)


def r_of_sequence(poset: FinitePoset, seq) -> int:
    """The r-value: alternating interval ranks with j_0 = top, i_(t+1) = bottom."""
    pairs = _pairs_of(seq)
    bounded = add_bounds(poset)
    total = 0
    prev_j = TOP
    for i, j in pairs:
        total += bounded.rank_interval(i, prev_j) - bounded.rank_interval(i, j)
        prev_j = j
    total += bounded.rank_interval(BOTTOM, prev_j)
    return total


def x_of_sequence(poset: FinitePoset, seq) -> dict[str, int]:
    """The x-values, keyed by i_m (the bottom element included with value 0)."""
    pairs = _pairs_of(seq)
    bounded = add_bounds(poset)
    t = len(pairs)
    xs: dict[str, int] = {}
    suffix = 0
    xs[BOTTOM] = 0
    for s in range(t - 1, -1, -1):
        i, j = pairs[s]
        nxt = pairs[s + 1][0] if s + 1 < t else BOTTOM
        suffix += bounded.rank_interval(nxt, j) - bounded.rank_interval(i, j)
        xs[i] = suffix
    return xs


def path_length_of_sequence(poset: FinitePoset, seq) -> int:
    """Number of Hasse-graph edges along the sequence's alternating intervals."""
    pairs = _pairs_of(seq)
    bounded = add_bounds(poset)
    length = 0
    prev_j = TOP
    for i, j in pairs:
        length += bounded.rank_interval(i, prev_j) + bounded.rank_interval(i, j)
        prev_j = j
    length += bounded.rank_interval(BOTTOM, prev_j)
    return length


def y_of_sequence(poset: FinitePoset, seq) -> ConePoint:
    """The minimal sharp point of a sequence: y_k = max rank[i_s, k] + x_{i_s}."""
    pairs = _pairs_of(seq)
    bounded = add_bounds(poset)
    xs = x_of_sequence(poset, seq)
    sources = [i for i, _ in pairs] + [BOTTOM]
    values: dict[str, int] = {}
    for k in poset.elements:
        best = None
        for i in sources:
            if i == BOTTOM or bounded.leq(i, k):
                v = bounded.rank_interval(i, k) + xs[i]
                if best is None or v > best:
                    best = v
        values[k] = best
    height = max(
        (bounded.rank_interval(i, TOP) + xs[i] for i in sources), default=1
    )
    return cone_point(poset, values, height)


def check_level_miyazaki(
    poset: FinitePoset, budget: int = SEQUENCE_BUDGET
) -> LevelnessCertificate:
    """Level iff the maximal r-value over condition-N sequences is the codegree.

    The witness for NOT_LEVEL is the first maximizing sequence in enumeration
    order together with its y-point, which is interior at height r_max.
    """
    r = codegree_via_rank(poset)
    r_max = None
    best: ConditionNSequence | None = None
    best_length = 0
    for seq in enumerate_condition_n(poset, budget=budget):
        value = r_of_sequence(poset, seq)
        if r_max is not None and value < r_max:
            continue
        length = path_length_of_sequence(poset, seq)
        # prefer higher r, then the shortest witness path, then discovery order
        if r_max is None or value > r_max or length < best_length:
            r_max = value
            best = seq
            best_length = length
    assert r_max is not None and r_max >= r
    if r_max == r:
        return LevelnessCertificate(LEVEL, "condition_n", r, r_max=r_max)
    point = y_of_sequence(poset, best)
    if not point.interior or point.height != r_max:
        raise AssertionError(
            f"maximizing sequence {best.pairs} produced an invalid y-point"
        )
    return LevelnessCertificate(
        NOT_LEVEL,
        "condition_n",
        r,
        r_max=r_max,
        sequence=best,
        witness_point=point,
    )


# -- subset scan over the digraph characterization ---------------------------


def _sorted_bounded_covers(bounded: BoundedPoset) -> list[tuple[str, str]]:
    return sorted(bounded.covers, key=lambda e: (e[0], e[1]))


def check_level_subsets(
    poset: FinitePoset,
    budget_bits: int = SUBSET_BUDGET_BITS,
    workers: int | None = None,
) -> LevelnessCertificate:
    """Level iff no cover selection is clean but fails once longest chains join.

    Scans all subsets S of the bounded covers in binary-counter order (bit k
    is the k-th cover in lexicographic order).  A witness is the first S whose
    digraph has no negative cycle while the longest-chain augmentation has
    one; the certificate carries S, the cycle, and the interior point
    realizing S.
    """
    bounded = add_bounds(poset)
    covers = _sorted_bounded_covers(bounded)
    n_edges = len(covers)
    if n_edges > budget_bits:
        raise BudgetExceeded(
            f"{n_edges} bounded covers exceed the subset budget of "
            f"{budget_bits} bits"
        )
    r = bounded.rank()
    node_of = {e: k for k, e in enumerate(bounded.elements)}
    up_u = np.asarray([node_of[i] for i, _ in covers], dtype=np.int64)
    up_v = np.asarray([node_of[j] for _, j in covers], dtype=np.int64)
    long_edges = set(bounded.longest_chain_edges())
    lmask = 0
    for k, e in enumerate(covers):
        if e in long_edges:
            lmask |= 1 << k
    n_nodes = len(bounded.elements)
    total = 1 << n_edges

    if workers is None or workers <= 1 or total < 4096:
        hit = int(
            _kernels.subset_scan(
                n_nodes, up_u, up_v, up_v, up_u, lmask, 0, total
            )
        )
    else:
        chunk = (total + workers - 1) // workers
        ranges = [
            (lo, min(lo + chunk, total)) for lo in range(0, total, chunk)
        ]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(
                pool.map(
                    lambda se: int(
                        _kernels.subset_scan(
                            n_nodes, up_u, up_v, up_v, up_u, lmask, se[0], se[1]
                        )
                    ),
                    ranges,
                )
            )
        found = [h for h in hits if h >= 0]
        hit = min(found) if found else -1

    if hit < 0:
        return LevelnessCertificate(LEVEL, "subsets", r)
    prime = tuple(covers[k] for k in range(n_edges) if (hit >> k) & 1)
    graph = gamma(bounded, prime)
    clean = bellman_ford(graph, BOTTOM)
    if not isinstance(clean, Potentials):
        raise AssertionError("witness subset unexpectedly has a negative cycle")
    augmented = augment_with_longest_chains(graph, bounded)
    cycle = bellman_ford(augmented, BOTTOM)
    if not isinstance(cycle, NegativeCycle):
        raise AssertionError("witness subset lost its negative cycle on recheck")
    point = potentials_to_point(bounded, prime)
    return LevelnessCertificate(
        NOT_LEVEL,
        "subsets",
        r,
        prime_edges=prime,
        negative_cycle=cycle,
        witness_point=point,
    )


# -- brute force over interior cone points -----------------------------------


def check_level_bruteforce(
    poset: FinitePoset, leaf_budget: int = LEAF_BUDGET
) -> LevelnessCertificate:
    """Level iff every interior point up to height d + 1 decomposes.

    For each height h in (r, d + 1], every interior point x of the h-th
    dilate must split as x = y + z with y interior at height r and z a point
    of the (h - r)-th dilate.  Any interior point at height above d + 1
    always decomposes: some value in 1..h-1 is unused, and subtracting the
    indicator of the filter above that value steps the point one level down,
    so the height cap is exhaustive.
    """
    from .ehrhart import _strict_dfs_inputs

    d = len(poset)
    r = codegree_via_rank(poset)
    heights = range(r + 1, d + 2)
    total_leaves = sum(omega_strict(poset, h - 1) for h in heights)
    if total_leaves > leaf_budget:
        raise BudgetExceeded(
            f"{total_leaves} interior points to scan exceed the budget "
            f"{leaf_budget}"
        )
    if not heights:
        return LevelnessCertificate(LEVEL, "brute_force", r)

    topo, h_arr, up_slack, ptr, idx = _strict_dfs_inputs(poset)
    ys_elem = interior_points(poset, r)
    if d > 0 and ys_elem.shape[0] == 0:
        raise AssertionError(f"no interior points at the codegree height {r}")
    # reorder candidate columns to topo positions to match the scan kernel
    ys = np.empty_like(ys_elem)
    for k, e in enumerate(topo):
        ys[:, k] = ys_elem[:, e]
    pos = {e: k for k, e in enumerate(topo)}
    cov_a = np.asarray(
        [pos[poset.index(i)] for i, _ in poset.covers], dtype=np.int64
    )
    cov_b = np.asarray(
        [pos[poset.index(j)] for _, j in poset.covers], dtype=np.int64
    )
    out_row = np.empty(max(d, 1), dtype=np.int64)
    for h in heights:
        leaf = int(
            _kernels.scan_nondecomposable(
                d, h - 1, h_arr, up_slack, ptr, idx, ys, h - r, cov_a, cov_b,
                out_row,
            )
        )
        if leaf >= 0:
            values = {
                poset.elements[e]: int(out_row[pos[e]])
                for e in range(d)
            }
            point = cone_point(poset, values, h)
            assert point.interior
            return LevelnessCertificate(
                NOT_LEVEL, "brute_force", r, witness_point=point
            )
    return LevelnessCertificate(LEVEL, "brute_force", r)


def decomposes_at_codegree(poset: FinitePoset, point: ConePoint) -> bool:
    """Exhaustive re-check: point = (interior at height r) + cone point?"""
    r = codegree_via_rank(poset)
    if point.height <= r:
        return False
    gap = point.height - r
    x = np.asarray([point.value(e) for e in poset.elements], dtype=np.int64)
    ys = interior_points(poset, r)
    cov_a = np.asarray([poset.index(i) for i, _ in poset.covers], dtype=np.int64)
    cov_b = np.asarray([poset.index(j) for _, j in poset.covers], dtype=np.int64)
    hit = int(
        _kernels.first_nondecomposable(
            x.reshape(1, -1), ys, gap, cov_a, cov_b
        )
    )
    return hit < 0


def point_is_minimal(poset: FinitePoset, point: ConePoint) -> bool:
    """No interior point at any lower height subtracts off within the cone."""
    if not point.interior:
        return False
    x = np.asarray([point.value(e) for e in poset.elements], dtype=np.int64)
    cov_a = np.asarray([poset.index(i) for i, _ in poset.covers], dtype=np.int64)
    cov_b = np.asarray([poset.index(j) for _, j in poset.covers], dtype=np.int64)
    for lower in range(1, point.height):
        ys = interior_points(poset, lower)
        if ys.shape[0] == 0:
            continue
        hit = int(
            _kernels.first_nondecomposable(
                x.reshape(1, -1), ys, point.height - lower, cov_a, cov_b
            )
        )
        if hit < 0:
            return False
    return True


# -- necessary condition on single covers ------------------------------------


def check_ehh_condition(poset: FinitePoset) -> list[tuple[str, str]]:
    """Covers (i, j) violating height(j) + depth(i) <= rank + 1.

    An empty list is necessary for levelness but not sufficient.
    """
    bounded = add_bounds(poset)
    limit = bounded.rank() + 1
    return [
        (i, j)
        for i, j in poset.covers
        if bounded.height(j) + bounded.depth(i) > limit
    ]


def witness_sharp_point(poset: FinitePoset, cover: tuple[str, str]) -> ConePoint:
    """Interior point at the codegree height that is sharp on the cover.

    Built by the recursive relabeling x_k = max(height(k), x_i + rank[i, k])
    above i and x_k = height(k) elsewhere, with x_i = height(j) - 1.  Exists
    exactly when the cover satisfies the height/depth inequality.
    """
    i, j = cover
    if (i, j) not in set(poset.covers):
        raise NotACover(f"({i!r}, {j!r}) is not a cover of the poset")
    bounded = add_bounds(poset)
    r = bounded.rank()
    if bounded.height(j) + bounded.depth(i) > r + 1:
        raise ConditionViolated(
            f"cover ({i!r}, {j!r}) fails height(j) + depth(i) <= rank + 1; "
            "no sharp interior point exists at the codegree height"
        )
    xi = bounded.height(j) - 1
    values: dict[str, int] = {}
    for k in poset.elements:
        if k == i:
            values[k] = xi
        elif poset.less(i, k):
            values[k] = max(bounded.height(k), xi + bounded.rank_interval(i, k))
        else:
            values[k] = bounded.height(k)
    point = cone_point(poset, values, r)
    if not point.interior or not is_sharp(point, (i, j)):
        raise AssertionError(
            f"sharp-point construction failed for cover ({i!r}, {j!r})"
        )
    return point


# -- orchestration and validation ---------------------------------------------

_METHODS = ("subsets", "condition_n", "brute_force")


def check_level(
    poset: FinitePoset,
    methods=_METHODS,
    budget_bits: int = SUBSET_BUDGET_BITS,
    sequence_budget: int = SEQUENCE_BUDGET,
    leaf_budget: int = LEAF_BUDGET,
    workers: int | None = None,
) -> dict[str, LevelnessCertificate]:
    """Run the requested checkers and insist that their verdicts agree."""
    certs: dict[str, LevelnessCertificate] = {}
    for method in methods:
        if method == "subsets":
            certs[method] = check_level_subsets(
                poset, budget_bits=budget_bits, workers=workers
            )
        elif method == "condition_n":
            certs[method] = check_level_miyazaki(poset, budget=sequence_budget)
        elif method == "brute_force":
            certs[method] = check_level_bruteforce(poset, leaf_budget=leaf_budget)
        else:
            raise ValueError(f"unknown method {method!r}")
    verdicts = {c.verdict for c in certs.values()}
    if len(verdicts) > 1:
        raise CheckerDisagreement(
            f"levelness checkers disagree on {poset!r}: "
            + ", ".join(f"{m}={c.verdict}" for m, c in certs.items()),
            poset=poset,
            certificates=certs,
        )
    return certs


def is_level(poset: FinitePoset, method: str = "subsets", **kwargs) -> bool:
    return check_level(poset, methods=(method,), **kwargs)[method].level


def validate_certificate(poset: FinitePoset, cert: LevelnessCertificate) -> bool:
    """Independently re-verify a certificate; True when everything holds."""
    r = codegree_via_rank(poset)
    if cert.r != r:
        return False
    if cert.level:
        return cert.negative_cycle is None and (
            cert.method != "condition_n" or cert.r_max == r
        )
    if cert.method == "subsets":
        if cert.prime_edges is None or cert.negative_cycle is None:
            return False
        graph = gamma(poset, cert.prime_edges)
        if not isinstance(bellman_ford(graph, BOTTOM), Potentials):
            return False
        augmented = augment_with_longest_chains(graph)
        if not isinstance(bellman_ford(augmented, BOTTOM), NegativeCycle):
            return False
        if not _cycle_in_graph(cert.negative_cycle, augmented):
            return False
        point = cert.witness_point
        if point is not None:
            if not point.interior:
                return False
            if not all(is_sharp(point, e) for e in cert.prime_edges):
                return False
        return True
    if cert.method == "condition_n":
        seq = cert.sequence
        if seq is None or cert.r_max is None or cert.r_max <= r:
            return False
        if not check_condition_n(poset, seq.pairs):
            return False
        if r_of_sequence(poset, seq) != cert.r_max:
            return False
        point = y_of_sequence(poset, seq)
        if cert.witness_point is not None and point != cert.witness_point:
            return False
        return point.interior and point.height == cert.r_max
    if cert.method == "brute_force":
        point = cert.witness_point
        if point is None or not point.interior:
            return False
        if not r < point.height <= len(poset) + 1:
            return False
        return not decomposes_at_codegree(poset, point)
    return False


def _cycle_in_graph(cycle: NegativeCycle, graph: WeightedDigraph) -> bool:
    weight_of = {(u, v): w for u, v, w in graph.edges}
    total = 0
    for a, b in cycle.edge_pairs():
        if (a, b) not in weight_of:
            return False
        total += weight_of[(a, b)]
    return total == cycle.weight and total < 0


def find_level_poset_with_long_path(
    max_size: int = 6,
    attempts: int = 500,
    seed: int = 0,
):
    """Search for a level poset with a condition-N path longer than its rank.

    The path length of a sequence is the total number of Hasse-graph edges
    along its alternating up and down intervals.  Returns (poset, sequence,
    length) or None when no example turns up within the attempt budget.
    """
    from .catalog import random_poset

    for trial in range(attempts):
        poset = random_poset(max_size, seed=seed + trial)
        bounded = add_bounds(poset)
        r = bounded.rank()
        try:
            cert = check_level_subsets(poset)
        except BudgetExceeded:
            continue
        if not cert.level:
            continue
        for seq in enumerate_condition_n(poset, budget=100_000):
            if not seq.pairs:
                continue
            length = path_length_of_sequence(poset, seq)
            if length > r:
                return poset, seq, length
    return None
