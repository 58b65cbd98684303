"""Alcoved polytopes, simplices, products, and Minkowski-sum levelness.

An alcoved polytope lives in coordinates z_1..z_d and is cut out by bounds on
the differences z_i - z_j, with z_0 identified with 0 so that single-variable
bounds are differences against z_0.  Instances are stored in canonical
tightened form: a (d+1) x (d+1) integer matrix M with M[i][j] the exact
maximum of z_i - z_j over the polytope, closed under the triangle inequality.
Tightness makes every operation exact and cheap: lattice enumeration walks
coordinate windows that never dead-end, dilation scales M, the interior
shrink subtracts 1 everywhere, and Minkowski sums add matrices entrywise.

Simplices are handled by exact barycentric coordinates and products
blockwise, which is enough to brute-force levelness of products of small
polytopes by the decomposition test at each height.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyShrink,
    InfeasibleSystem,
    NotFullDimensional,
    UnboundedPolytope,
)
from .posets import FinitePoset

POINT_BUDGET = 2_000_000

LatticePoints = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class EmptyPolytope:
    """Marker for an empty interior shrink; enumerations yield nothing."""

    dimension: int

    def lattice_points(self, k: int = 1, budget: int = POINT_BUDGET) -> LatticePoints:
        return ()

    def interior_lattice_points(
        self, k: int = 1, budget: int = POINT_BUDGET
    ) -> LatticePoints:
        return ()

    def dilate(self, k: int) -> "EmptyPolytope":
        return self

    def shrink(self) -> "EmptyPolytope":
        return self

    def contains(self, point, k: int = 1, strict: bool = False) -> bool:
        return False

    def to_json(self) -> dict:
        return {"dim": self.dimension, "empty": True}


class AlcovedPolytope:
    """Nonempty bounded alcoved polytope in canonical tightened form."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0] - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlcovedPolytope):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(
            (self.matrix == other.matrix).all()
        )

    def __repr__(self) -> str:
        return f"AlcovedPolytope(dim={self.dimension})"

    def bound(self, i: int, j: int) -> int:
        """Exact maximum of z_i - z_j over the polytope (index 0 is z_0 = 0)."""
        return int(self.matrix[i, j])

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_bounds(dim: int, bounds) -> "AlcovedPolytope":
        """Build from difference constraints lo <= z_i - z_j <= hi.

        bounds is an iterable of (i, j, lo, hi) with indices in 0..dim and
        either bound may be None for one-sided constraints.  The system is
        tightened by all-pairs shortest paths; an infeasible system or an
        unbounded coordinate is rejected.
        """
        n = dim + 1
        mat = np.full((n, n), _kernels.INF, dtype=np.int64)
        np.fill_diagonal(mat, 0)
        for i, j, lo, hi in bounds:
            if not (0 <= i <= dim and 0 <= j <= dim) or i == j:
                raise ValueError(f"bad coordinate pair ({i}, {j})")
            if hi is not None:
                mat[i, j] = min(mat[i, j], int(hi))
            if lo is not None:
                mat[j, i] = min(mat[j, i], -int(lo))
        return AlcovedPolytope(_tighten(mat))

    @staticmethod
    def from_json(doc: dict) -> "AlcovedPolytope":
        return AlcovedPolytope.from_bounds(
            int(doc["dim"]),
            [
                (int(b["i"]), int(b["j"]), b.get("lo"), b.get("hi"))
                for b in doc["bounds"]
            ],
        )

    def to_json(self) -> dict:
        bounds = []
        for i in range(1, self.dimension + 1):
            for j in range(i):
                bounds.append(
                    {
                        "i": i,
                        "j": j,
                        "lo": -int(self.matrix[j, i]),
                        "hi": int(self.matrix[i, j]),
                    }
                )
        return {"dim": self.dimension, "bounds": bounds}

    # -- closed operations ---------------------------------------------------

    def dilate(self, k: int) -> "AlcovedPolytope":
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        mat = self.matrix * k
        tight = _tighten(mat.copy())
        if not (tight == mat).all():
            raise AssertionError("dilation broke canonical tightness")
        return AlcovedPolytope(tight)

    def shrink(self) -> "AlcovedPolytope | EmptyPolytope":
        """Move every facet inward by 1; its lattice points are the interior ones."""
        mat = self.matrix - 1
        np.fill_diagonal(mat, 0)
        try:
            return AlcovedPolytope(_tighten(mat))
        except InfeasibleSystem:
            return EmptyPolytope(self.dimension)

    def minkowski_sum(self, other: "AlcovedPolytope") -> "AlcovedPolytope":
        if self.dimension != other.dimension:
            raise DimensionMismatch(
                f"cannot add polytopes of dimensions {self.dimension} "
                f"and {other.dimension}"
            )
        mat = self.matrix + other.matrix
        tight = _tighten(mat.copy())
        if not (tight == mat).all():
            raise AssertionError("bound sums of tight matrices must stay tight")
        return AlcovedPolytope(tight)

    # -- point queries --------------------------------------------------------

    def contains(self, point, k: int = 1, strict: bool = False) -> bool:
        """Membership of an integer point in the k-th dilate."""
        z = (0,) + tuple(point)
        if len(z) != self.dimension + 1:
            raise DimensionMismatch(
                f"point has {len(z) - 1} coordinates, expected {self.dimension}"
            )
        mat = self.matrix
        n = len(z)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                bound = k * int(mat[i, j])
                diff = z[i] - z[j]
                if diff > bound or (strict and diff == bound):
                    return False
        return True

    def lattice_points(
        self, k: int = 1, budget: int = POINT_BUDGET
    ) -> LatticePoints:
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        return _enumerate_matrix(self.matrix * k, budget)

    def interior_lattice_points(
        self, k: int = 1, budget: int = POINT_BUDGET
    ) -> LatticePoints:
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        mat = self.matrix * k - 1
        np.fill_diagonal(mat, 0)
        if not bool(_kernels.floyd_warshall(mat)):
            return ()
        return _enumerate_matrix(mat, budget)


def _tighten(mat: np.ndarray) -> np.ndarray:
    big = _kernels.INF // 4
    if not bool(_kernels.floyd_warshall(mat)):
        raise InfeasibleSystem("difference constraints admit no solution")
    if int(mat.max()) > big:
        raise UnboundedPolytope(
            "some coordinate or difference is unbounded; alcoved polytopes "
            "must be bounded"
        )
    return mat


def _enumerate_matrix(mat: np.ndarray, budget: int) -> LatticePoints:
    if mat.shape[0] == 1:
        return ((),)
    count = int(_kernels.alcoved_count(mat))
    if count > budget:
        raise BudgetExceeded(f"{count} lattice points exceed the budget {budget}")
    out = np.empty((count, mat.shape[0] - 1), dtype=np.int64)
    filled = int(_kernels.alcoved_fill(mat, out))
    if filled != count:
        raise AssertionError("lattice count and enumeration disagree")
    return tuple(tuple(int(v) for v in row) for row in out)


# -- simplices ----------------------------------------------------------------


class SimplexPolytope:
    """Lattice simplex given by d + 1 affinely independent integer vertices."""

    __slots__ = ("vertices", "_inverse")

    def __init__(self, vertices):
        verts = tuple(tuple(int(c) for c in v) for v in vertices)
        if not verts:
            raise ValueError("a simplex needs at least one vertex")
        d = len(verts[0])
        if any(len(v) != d for v in verts):
            raise DimensionMismatch("vertices have mixed dimensions")
        if len(verts) != d + 1:
            raise ValueError(
                f"a {d}-dimensional simplex needs exactly {d + 1} vertices"
            )
        self.vertices = verts
        base = verts[0]
        # rows[r][t-1] = coordinate r of V_t - V_0, the edge matrix to invert
        rows = [
            [Fraction(verts[t][r] - base[r]) for t in range(1, d + 1)]
            for r in range(d)
        ]
        inv = _invert_fraction_matrix(rows)
        if inv is None:
            raise ValueError("vertices are affinely dependent")
        self._inverse = inv

    @property
    def dimension(self) -> int:
        return len(self.vertices[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplexPolytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __repr__(self) -> str:
        return f"SimplexPolytope(vertices={list(self.vertices)!r})"

    @staticmethod
    def from_json(doc: dict) -> "SimplexPolytope":
        return SimplexPolytope(doc["vertices"])

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    def barycentric(self, point, k: int = 1) -> tuple[Fraction, ...]:
        """Weights mu with sum(mu) = k and sum(mu_t * V_t) = point."""
        d = self.dimension
        base = self.vertices[0]
        rhs = [Fraction(point[c] - k * base[c]) for c in range(d)]
        rest = [
            sum(self._inverse[t][c] * rhs[c] for c in range(d)) for t in range(d)
        ]
        first = Fraction(k) - sum(rest)
        return (first, *rest)

    def contains(self, point, k: int = 1, strict: bool = False) -> bool:
        if len(point) != self.dimension:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, expected {self.dimension}"
            )
        mu = self.barycentric(point, k)
        if strict:
            return all(m > 0 for m in mu)
        return all(m >= 0 for m in mu)

    def _box_scan(self, k: int, strict: bool, budget: int) -> LatticePoints:
        d = self.dimension
        lo = [k * min(v[c] for v in self.vertices) for c in range(d)]
        hi = [k * max(v[c] for v in self.vertices) for c in range(d)]
        volume = 1
        for a, b in zip(lo, hi):
            volume *= b - a + 1
        if volume > budget:
            raise BudgetExceeded(
                f"bounding box holds {volume} candidates, over the budget {budget}"
            )
        points = []
        for cand in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            if self.contains(cand, k=k, strict=strict):
                points.append(cand)
        return tuple(points)

    def lattice_points(self, k: int = 1, budget: int = POINT_BUDGET) -> LatticePoints:
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        return self._box_scan(k, strict=False, budget=budget)

    def interior_lattice_points(
        self, k: int = 1, budget: int = POINT_BUDGET
    ) -> LatticePoints:
        if k < 1:
            raise ValueError("dilation factor must be a positive integer")
        return self._box_scan(k, strict=True, budget=budget)


def _invert_fraction_matrix(rows):
    """Inverse of a square row-major Fraction matrix; None if singular."""
    d = len(rows)
    aug = [
        list(rows[r]) + [Fraction(int(r == c)) for c in range(d)]
        for r in range(d)
    ]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    # result rows t give weights for vertex t+1 as a function of rhs entries
    return [[aug[t][d + c] for c in range(d)] for t in range(d)]


# -- products -----------------------------------------------------------------


class ProductPolytope:
    """Cartesian product; every query decomposes blockwise."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a product needs at least one factor")
        self.factors = factors

    @property
    def dimension(self) -> int:
        return sum(f.dimension for f in self.factors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProductPolytope):
            return NotImplemented
        return self.factors == other.factors

    def __repr__(self) -> str:
        return f"ProductPolytope({len(self.factors)} factors, dim={self.dimension})"

    def to_json(self) -> dict:
        return {"product": [f.to_json() for f in self.factors]}

    def _blocks(self, point):
        at = 0
        for f in self.factors:
            yield f, tuple(point[at : at + f.dimension])
            at += f.dimension

    def contains(self, point, k: int = 1, strict: bool = False) -> bool:
        if len(point) != self.dimension:
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, expected {self.dimension}"
            )
        return all(f.contains(blk, k=k, strict=strict) for f, blk in self._blocks(point))

    def _combine(self, parts) -> LatticePoints:
        return tuple(
            tuple(itertools.chain.from_iterable(combo))
            for combo in itertools.product(*parts)
        )

    def lattice_points(self, k: int = 1, budget: int = POINT_BUDGET) -> LatticePoints:
        parts = [f.lattice_points(k, budget=budget) for f in self.factors]
        total = 1
        for p in parts:
            total *= len(p)
        if total > budget:
            raise BudgetExceeded(f"{total} product points exceed the budget {budget}")
        return self._combine(parts)

    def interior_lattice_points(
        self, k: int = 1, budget: int = POINT_BUDGET
    ) -> LatticePoints:
        parts = [f.interior_lattice_points(k, budget=budget) for f in self.factors]
        total = 1
        for p in parts:
            total *= len(p)
        if total > budget:
            raise BudgetExceeded(f"{total} product points exceed the budget {budget}")
        return self._combine(parts)


def product(*factors) -> ProductPolytope:
    return ProductPolytope(factors)


def polytope_from_json(doc: dict):
    if "product" in doc:
        return ProductPolytope([polytope_from_json(f) for f in doc["product"]])
    if "vertices" in doc:
        return SimplexPolytope.from_json(doc)
    if doc.get("empty"):
        return EmptyPolytope(int(doc["dim"]))
    return AlcovedPolytope.from_json(doc)


# -- order and chain polytopes as polytopes -----------------------------------


def order_polytope_as_alcoved(poset: FinitePoset) -> AlcovedPolytope:
    """The order polytope: 0 <= z <= 1 and z_a <= z_b along covers."""
    d = len(poset)
    bounds = [(i, 0, 0, 1) for i in range(1, d + 1)]
    for a, b in poset.covers:
        bounds.append((poset.index(a) + 1, poset.index(b) + 1, None, 0))
    return AlcovedPolytope.from_bounds(d, bounds)


def order_polytope_vertices(poset: FinitePoset) -> LatticePoints:
    """Filter indicator vectors, the empty filter first."""
    return tuple(ind for _, ind in poset.filters())


def chain_polytope_vertices(poset: FinitePoset) -> LatticePoints:
    """Antichain indicator vectors."""
    return tuple(ind for _, ind in poset.antichains())


# -- sumsets and levelness ------------------------------------------------------


def minkowski_sumset(a: LatticePoints, b: LatticePoints) -> LatticePoints:
    """All pairwise sums, sorted and deduplicated."""
    if a and b and len(a[0]) != len(b[0]):
        raise DimensionMismatch(
            f"point sets live in dimensions {len(a[0])} and {len(b[0])}"
        )
    sums = {tuple(x + y for x, y in zip(p, q)) for p in a for q in b}
    return tuple(sorted(sums))


def polytope_codegree(polytope, cap: int | None = None, budget: int = POINT_BUDGET) -> int:
    """Least dilate with an interior lattice point; full-dim bound is dim + 1."""
    limit = polytope.dimension + 1 if cap is None else cap
    for c in range(1, limit + 1):
        if polytope.interior_lattice_points(c, budget=budget):
            return c
    raise NotFullDimensional(
        f"no interior lattice point up to dilate {limit}; the polytope is "
        "not full-dimensional or the cap is too small"
    )


@dataclass(frozen=True)
class PolytopeLevelReport:
    """Bounded levelness verdict; LEVEL_UP_TO(k) is not a proof beyond k."""

    verdict: str
    codegree: int
    k_max: int
    failed_k: int | None = None
    witness: tuple[int, ...] | None = None

    @property
    def level(self) -> bool:
        return self.failed_k is None

    def to_json(self) -> dict:
        doc = {
            "verdict": self.verdict,
            "codegree": self.codegree,
            "k_max": self.k_max,
        }
        if self.failed_k is not None:
            doc["failed_k"] = self.failed_k
        if self.witness is not None:
            doc["witness"] = list(self.witness)
        return doc


def check_level_alcoved(
    alcoved: AlcovedPolytope,
    k_max: int | None = None,
    budget: int = POINT_BUDGET,
) -> PolytopeLevelReport:
    """Minkowski-sum levelness test for alcoved polytopes.

    For each k in r+1..k_max checks the set identity: interior points of kP
    equal the sumset of the interior points of rP with the points of
    (k - r)P.  Failure at some k yields NOT_LEVEL with the smallest witness;
    success is only a bound, reported as LEVEL_UP_TO(k_max).
    """
    r = polytope_codegree(alcoved, budget=budget)
    if k_max is None:
        k_max = alcoved.dimension + 1
    generators = set(alcoved.interior_lattice_points(r, budget=budget))
    for k in range(r + 1, k_max + 1):
        interior = set(alcoved.interior_lattice_points(k, budget=budget))
        summed = set(
            minkowski_sumset(
                tuple(generators), alcoved.lattice_points(k - r, budget=budget)
            )
        )
        if summed != interior:
            if not summed <= interior:
                raise AssertionError(
                    "sumset left the interior; the shrink identity is broken"
                )
            witness = min(interior - summed)
            return PolytopeLevelReport("NOT_LEVEL", r, k_max, k, witness)
    return PolytopeLevelReport(f"LEVEL_UP_TO({k_max})", r, k_max)


def lem_min_check(
    alcoved: AlcovedPolytope, r_prime: int, k: int, budget: int = POINT_BUDGET
) -> bool:
    """Downward propagation of the sum identity from k to all r' <= k' < k.

    Requires the identity to hold at k itself; then each smaller k' must
    satisfy it too, so True is the only correct outcome.
    """
    if not _sum_identity_holds(alcoved, r_prime, k, budget):
        raise ValueError(f"the sum identity does not hold at k={k}")
    return all(
        _sum_identity_holds(alcoved, r_prime, kp, budget)
        for kp in range(r_prime, k)
    )


def _sum_identity_holds(
    alcoved: AlcovedPolytope, r: int, k: int, budget: int
) -> bool:
    interior = set(alcoved.interior_lattice_points(k, budget=budget))
    if k == r:
        return True
    summed = set(
        minkowski_sumset(
            alcoved.interior_lattice_points(r, budget=budget),
            alcoved.lattice_points(k - r, budget=budget),
        )
    )
    return summed == interior


def check_level_points(
    polytope, k_max: int | None = None, budget: int = POINT_BUDGET
) -> PolytopeLevelReport:
    """Generic bounded levelness by the decomposition test.

    Every interior point of kP (r < k <= k_max) must split as an interior
    point of rP plus a point of (k - r)P, membership checked exactly.
    """
    r = polytope_codegree(polytope, budget=budget)
    if k_max is None:
        k_max = polytope.dimension + 1
    generators = polytope.interior_lattice_points(r, budget=budget)
    for k in range(r + 1, k_max + 1):
        gap = k - r
        for x in polytope.interior_lattice_points(k, budget=budget):
            decomposed = False
            for y in generators:
                z = tuple(a - b for a, b in zip(x, y))
                if polytope.contains(z, k=gap):
                    decomposed = True
                    break
            if not decomposed:
                return PolytopeLevelReport("NOT_LEVEL", r, k_max, k, x)
    return PolytopeLevelReport(f"LEVEL_UP_TO({k_max})", r, k_max)


def idp_up_to(polytope, k_max: int, budget: int = POINT_BUDGET) -> bool:
    """Integer-decomposition property verified by sumset closure up to k_max."""
    base = polytope.lattice_points(1, budget=budget)
    prev = base
    for h in range(2, k_max + 1):
        expected = set(polytope.lattice_points(h, budget=budget))
        summed = set(minkowski_sumset(prev, base))
        if summed != expected:
            return False
        prev = tuple(sorted(expected))
    return True


@dataclass(frozen=True)
class ProductLevelReport:
    """Which sufficient product rule applies, plus the brute-force verdict."""

    codegree_p: int
    codegree_q: int
    codegree_product: int
    p_level: bool
    q_level: bool
    p_idp: bool
    q_idp: bool
    rule_applied: str | None
    verdict: str
    k_max: int
    failed_k: int | None = None
    witness: tuple[int, ...] | None = None

    @property
    def level(self) -> bool:
        return self.failed_k is None

    def to_json(self) -> dict:
        doc = {
            "codegree_p": self.codegree_p,
            "codegree_q": self.codegree_q,
            "codegree_product": self.codegree_product,
            "p_level": self.p_level,
            "q_level": self.q_level,
            "p_idp": self.p_idp,
            "q_idp": self.q_idp,
            "rule_applied": self.rule_applied,
            "verdict": self.verdict,
            "k_max": self.k_max,
        }
        if self.failed_k is not None:
            doc["failed_k"] = self.failed_k
        if self.witness is not None:
            doc["witness"] = list(self.witness)
        return doc


def check_product_level(
    p, q, k_max: int | None = None, budget: int = POINT_BUDGET
) -> ProductLevelReport:
    """Sufficient product rules compared against a direct bounded check.

    The rules: equal codegrees of two level factors; a level pair whose
    lower-codegree factor has the integer-decomposition property; or two
    alcoved factors where Q is level with codeg(Q) >= dim(P) + 1.  The
    verdict itself always comes from the decomposition test on the product.
    """
    prod = ProductPolytope((p, q))
    if k_max is None:
        k_max = prod.dimension + 1
    r_p = polytope_codegree(p, budget=budget)
    r_q = polytope_codegree(q, budget=budget)
    r_prod = polytope_codegree(prod, budget=budget)
    p_report = check_level_points(p, k_max=k_max, budget=budget)
    q_report = check_level_points(q, k_max=k_max, budget=budget)
    p_idp = idp_up_to(p, k_max, budget=budget)
    q_idp = idp_up_to(q, k_max, budget=budget)

    rule = None
    if p_report.level and q_report.level:
        if r_p == r_q:
            rule = "equal_codegrees"
        elif r_q < r_p and q_idp:
            rule = "lower_codegree_factor_idp"
        elif r_p < r_q and p_idp:
            rule = "lower_codegree_factor_idp"
    if rule is None and isinstance(p, AlcovedPolytope) and isinstance(q, AlcovedPolytope):
        if q_report.level and r_q >= p.dimension + 1:
            rule = "alcoved_codegree_bound"
        elif p_report.level and r_p >= q.dimension + 1:
            rule = "alcoved_codegree_bound"

    direct = check_level_points(prod, k_max=k_max, budget=budget)
    return ProductLevelReport(
        codegree_p=r_p,
        codegree_q=r_q,
        codegree_product=r_prod,
        p_level=p_report.level,
        q_level=q_report.level,
        p_idp=p_idp,
        q_idp=q_idp,
        rule_applied=rule,
        verdict=direct.verdict,
        k_max=k_max,
        failed_k=direct.failed_k,
        witness=direct.witness,
    )
