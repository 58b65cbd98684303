"""Exact lattice-point counting for order polytopes and h* machinery.

All arithmetic is exact: counts are Python ints (int64 numpy internally with
an overflow guard), polynomial coefficients are Fractions obtained by
Lagrange interpolation, and the h* transform is integer.

omega(poset, m) counts order-preserving maps into the chain {1, ..., m},
which equals the lattice-point count of the (m-1)-st dilate of the order
polytope.  omega_strict counts strictly order-preserving maps, equal to the
interior lattice-point count of the (m+1)-st dilate.  Both are computed by a
transfer-matrix walk over the filter lattice: weak maps correspond to weakly
decreasing chains of filters, strict maps to chains that shed an antichain of
minimal elements at each step.  The depth-first leaf counter in _kernels is
exponentially slower on antichain-rich posets and serves as the independent
test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, NegativeHStarEntry
from .posets import BOTTOM, TOP, FinitePoset, add_bounds

ENUMERATION_BUDGET = 12


# -- map counting -----------------------------------------------------------


def _filter_transfer(poset: FinitePoset):
    """Filter bitmasks, the containment matrix, and per-filter minimal masks."""
    masks = poset._filter_masks()
    contains = (masks[:, None] & masks[None, :]) == masks[None, :]
    n = len(poset)
    leq = poset.leq_matrix()
    strict_below = [0] * n
    for a in range(n):
        m = 0
        for b in range(n):
            if a != b and leq[b, a]:
                m |= 1 << b
        strict_below[a] = m
    min_mask = np.zeros(len(masks), dtype=np.int64)
    for fi, fm in enumerate(masks):
        mm = 0
        for a in range(n):
            if (fm >> a) & 1 and (fm & strict_below[a]) == 0:
                mm |= 1 << a
        min_mask[fi] = mm
    return masks, contains, min_mask


def omega(poset: FinitePoset, m: int) -> int:
    """Number of order-preserving maps from the poset into {1, ..., m}."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    n = len(poset)
    if n == 0:
        return 1
    if m == 0:
        return 0
    if m == 1:
        return 1
    masks, contains, _ = _filter_transfer(poset)
    if n * math.log2(max(m, 2)) < 62:
        u = np.ones(len(masks), dtype=np.int64)
        for _ in range(m - 2):
            u = contains.T @ u
        return int(u.sum())
    # overflow-safe path with Python ints
    supersets = [list(np.flatnonzero(contains[:, g])) for g in range(len(masks))]
    u = [1] * len(masks)
    for _ in range(m - 2):
        u = [sum(u[f] for f in supersets[g]) for g in range(len(masks))]
    return sum(u)


def omega_strict(poset: FinitePoset, m: int) -> int:
    """Number of strictly order-preserving maps into {1, ..., m}.

    Equals the interior lattice-point count of the (m+1)-st dilate of the
    order polytope.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    n = len(poset)
    if n == 0:
        return 1
    if m == 0:
        return 0
    masks, contains, min_mask = _filter_transfer(poset)
    full_idx = int(np.flatnonzero(masks == ((1 << n) - 1))[0])
    empty_idx = int(np.flatnonzero(masks == 0)[0])
    # step F -> G allowed iff G <= F and F \ G consists of minimal elements of F
    step = contains & (((masks[:, None] & ~masks[None, :]) & ~min_mask[:, None]) == 0)
    if n * math.log2(max(m, 2)) < 62:
        u = np.zeros(len(masks), dtype=np.int64)
        u[full_idx] = 1
        for _ in range(m):
            u = step.T @ u
        return int(u[empty_idx])
    preds = [list(np.flatnonzero(step[:, g])) for g in range(len(masks))]
    u = [0] * len(masks)
    u[full_idx] = 1
    for _ in range(m):
        u = [sum(u[f] for f in preds[g]) for g in range(len(masks))]
    return u[empty_idx]


def omega_oracle(poset: FinitePoset, m: int) -> int:
    """Leaf-enumeration counter; exponential, for cross-checks only."""
    n = len(poset)
    topo = poset._topo
    pos = {e: k for k, e in enumerate(topo)}
    ptr, idx = _pred_csr(poset, topo, pos)
    return int(_kernels.weak_maps_count(n, m, ptr, idx))


def _pred_csr(poset: FinitePoset, topo, pos):
    ptr = np.zeros(len(topo) + 1, dtype=np.int64)
    idx_list: list[int] = []
    for k, e in enumerate(topo):
        for p in poset._down[e]:
            idx_list.append(pos[p])
        ptr[k + 1] = len(idx_list)
    return ptr, np.asarray(idx_list, dtype=np.int64) if idx_list else np.zeros(0, dtype=np.int64)


def _strict_dfs_inputs(poset: FinitePoset):
    bounded = add_bounds(poset)
    topo = poset._topo
    pos = {e: k for k, e in enumerate(topo)}
    height = np.asarray(
        [bounded.height(poset.elements[e]) for e in topo], dtype=np.int64
    )
    up_slack = np.asarray(
        [bounded.depth(poset.elements[e]) - 1 for e in topo], dtype=np.int64
    )
    ptr, idx = _pred_csr(poset, topo, pos)
    return topo, height, up_slack, ptr, idx


def omega_strict_oracle(poset: FinitePoset, m: int) -> int:
    """Depth-first strict-map counter; independent of the transfer matrix."""
    n = len(poset)
    if n == 0:
        return 1
    if m < 0:
        return 0
    _, height, up_slack, ptr, idx = _strict_dfs_inputs(poset)
    return int(_kernels.strict_maps_count(n, m, height, up_slack, ptr, idx))


def interior_points(poset: FinitePoset, height: int) -> np.ndarray:
    """Interior lattice points of the height-th dilate, as strict labelings.

    Returns an (N, n) int64 array in element-index order, rows in the
    depth-first enumeration order of the topological labeling walk.
    """
    n = len(poset)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    m = height - 1
    if m <= 0:
        return np.zeros((0, n), dtype=np.int64)
    topo, h_arr, up_slack, ptr, idx = _strict_dfs_inputs(poset)
    count = int(_kernels.strict_maps_count(n, m, h_arr, up_slack, ptr, idx))
    out = np.empty((count, n), dtype=np.int64)
    filled = int(_kernels.strict_maps_fill(n, m, h_arr, up_slack, ptr, idx, out))
    if filled != count:
        raise AssertionError("strict map count and enumeration disagree")
    # columns are topological positions; reorder to element order
    result = np.empty_like(out)
    for k, e in enumerate(topo):
        result[:, e] = out[:, k]
    return result


# -- Ehrhart polynomial -------------------------------------------------------


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Exact polynomial with rational coefficients, constant term first."""

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, k: int) -> Fraction:
        acc = Fraction(0)
        power = Fraction(1)
        for c in self.coefficients:
            acc += c * power
            power *= k
        return acc

    def coefficient_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]


def interpolate_polynomial(values) -> tuple[Fraction, ...]:
    """Coefficients of the unique polynomial p with p(i) = values[i]."""
    values = [Fraction(v) for v in values]
    d = len(values) - 1
    coeffs = [Fraction(0)] * (d + 1)
    for i, yi in enumerate(values):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(d + 1):
            if j == i:
                continue
            # multiply basis by (X - j)
            nxt = [Fraction(0)] * (len(basis) + 1)
            for t, c in enumerate(basis):
                nxt[t] -= c * j
                nxt[t + 1] += c
            basis = nxt
            denom *= i - j
        scale = yi / denom
        for t, c in enumerate(basis):
            coeffs[t] += scale * c
    return tuple(coeffs)


def ehrhart_polynomial(
    poset: FinitePoset, budget: int = ENUMERATION_BUDGET
) -> EhrhartPolynomial:
    """Ehrhart polynomial of the order polytope, by exact interpolation.

    Interpolates the counts at dilates 0..d and verifies the value at d+1
    against an independent count before returning.
    """
    d = len(poset)
    if d > budget:
        raise BudgetExceeded(
            f"poset has {d} elements, over the enumeration budget {budget}"
        )
    values = [omega(poset, k + 1) for k in range(d + 1)]
    poly = EhrhartPolynomial(interpolate_polynomial(values))
    check = poly.evaluate(d + 1)
    expected = omega(poset, d + 2)
    if check != expected:
        raise AssertionError(
            f"interpolation failed its guard at dilate {d + 1}: {check} != {expected}"
        )
    return poly


# -- h* vector ----------------------------------------------------------------


@dataclass(frozen=True)
class HStarVector:
    """Integer h* entries, indices 0..d (trailing zeros retained)."""

    entries: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.entries) - 1

    @property
    def degree(self) -> int:
        nz = [k for k, v in enumerate(self.entries) if v != 0]
        return nz[-1]

    @property
    def codegree(self) -> int:
        return self.dimension + 1 - self.degree

    def trimmed(self) -> tuple[int, ...]:
        """Entries up to the degree, trailing zeros dropped."""
        return self.entries[: self.degree + 1]

    def polynomial_product(self, other: "HStarVector") -> tuple[int, ...]:
        a, b = self.entries, other.entries
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return tuple(out)


def hstar_from_counts(counts, dimension: int) -> HStarVector:
    """h* by the binomial transform of the counts ehr(0), ..., ehr(d)."""
    counts = [int(c) for c in counts]
    if len(counts) != dimension + 1:
        raise ValueError("need exactly d + 1 counts, dilates 0..d")
    d = dimension
    entries = []
    for j in range(d + 1):
        v = 0
        for i in range(j + 1):
            v += (-1) ** i * math.comb(d + 1, i) * counts[j - i]
        entries.append(v)
    if entries and entries[0] != 1:
        raise NegativeHStarEntry(f"h*_0 = {entries[0]}, expected 1")
    for k, v in enumerate(entries):
        if v < 0:
            raise NegativeHStarEntry(f"h*_{k} = {v} is negative")
    return HStarVector(tuple(entries))


def hstar(poset: FinitePoset, budget: int = ENUMERATION_BUDGET) -> HStarVector:
    """h* vector of the order polytope, cross-checked against the rank."""
    d = len(poset)
    if d > budget:
        raise BudgetExceeded(
            f"poset has {d} elements, over the enumeration budget {budget}"
        )
    counts = [omega(poset, k + 1) for k in range(d + 1)]
    vec = hstar_from_counts(counts, d)
    expected = codegree_via_rank(poset)
    if vec.codegree != expected:
        raise AssertionError(
            f"codegree from h* is {vec.codegree} but the bounded rank is {expected}"
        )
    return vec


def codegree_via_rank(poset: FinitePoset) -> int:
    """Codegree of the order polytope: longest-chain edge count with bounds."""
    return add_bounds(poset).rank()


def stanley_level_inequalities(vec: HStarVector) -> list[tuple[int, int]]:
    """Pairs (i, j) violating h*_i <= h*_j * h*_{i+j} where h*_{i+j} > 0."""
    h = vec.entries
    d = vec.dimension
    bad = []
    for i in range(d + 1):
        for j in range(d + 1 - i):
            if h[i + j] > 0 and h[i] > h[j] * h[i + j]:
                bad.append((i, j))
    return bad


def hstar_ordinal_sum_check(p1: FinitePoset, p2: FinitePoset) -> bool:
    """True iff h* of the ordinal sum equals the product of the factors' h*."""
    from .posets import ordinal_sum

    total = hstar(ordinal_sum(p1, p2, rename_on_collision=True))
    left = hstar(p1)
    right = hstar(p2)
    product = left.polynomial_product(right)
    want = tuple(product[: len(total.entries)])
    pad = len(total.entries) - len(want)
    if any(product[len(want):]):
        return False
    return total.entries == want + (0,) * pad
