"""Levelness of order polytopes of finite posets.

Three independent deciders (a weighted-digraph subset scan with negative-cycle
certificates, a zigzag-sequence maximization, and a brute-force lattice-point
oracle), exact Ehrhart and h* machinery, and alcoved-polytope levelness by
Minkowski sums.  See the README for the CLI.
"""

__version__ = "0.1.0"

from ._kernels import USE_NUMBA, kernel_mode
from .alcoved import (
    AlcovedPolytope,
    EmptyPolytope,
    PolytopeLevelReport,
    ProductLevelReport,
    ProductPolytope,
    SimplexPolytope,
    chain_polytope_vertices,
    check_level_alcoved,
    check_level_points,
    check_product_level,
    idp_up_to,
    lem_min_check,
    minkowski_sumset,
    order_polytope_as_alcoved,
    order_polytope_vertices,
    polytope_codegree,
    polytope_from_json,
    product,
)
from .digraph import (
    ConePoint,
    NegativeCycle,
    Potentials,
    WeightedDigraph,
    augment_with_longest_chains,
    bellman_ford,
    cone_point,
    gamma,
    gamma_b,
    has_negative_cycle,
    hasse_graph,
    is_interior_labeling,
    is_sharp,
    potentials_to_point,
)
from .ehrhart import (
    EhrhartPolynomial,
    HStarVector,
    codegree_via_rank,
    ehrhart_polynomial,
    hstar,
    hstar_from_counts,
    hstar_ordinal_sum_check,
    interior_points,
    interpolate_polynomial,
    omega,
    omega_oracle,
    omega_strict,
    omega_strict_oracle,
    stanley_level_inequalities,
)
from .errors import (
    BudgetExceeded,
    CheckerDisagreement,
    ConditionViolated,
    CycleDetected,
    DimensionMismatch,
    EmptyShrink,
    HasNegativeCycle,
    IdentifierCollision,
    InfeasibleSystem,
    NegativeHStarEntry,
    NotACover,
    NotComparable,
    NotFullDimensional,
    NotInterior,
    OrderLevelError,
    RedundantCover,
    UnboundedPolytope,
    UnknownElement,
)
from .levelness import (
    ConditionNSequence,
    LevelnessCertificate,
    check_condition_n,
    check_ehh_condition,
    check_level,
    check_level_bruteforce,
    check_level_miyazaki,
    check_level_subsets,
    decomposes_at_codegree,
    enumerate_condition_n,
    is_level,
    point_is_minimal,
    r_of_sequence,
    validate_certificate,
    witness_sharp_point,
    x_of_sequence,
    y_of_sequence,
)
from .posets import (
    BOTTOM,
    TOP,
    BoundedPoset,
    FinitePoset,
    PosetStats,
    add_bounds,
    antichain,
    chain,
    disjoint_union,
    from_covers,
    ordinal_sum,
    poset_from_json,
    poset_to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
