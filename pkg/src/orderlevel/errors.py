"""Exception types shared across the package.

Every validation failure raises a dedicated class so callers (and the CLI,
which maps them to exit code 2) can tell input errors apart from bugs.
"""


class OrderLevelError(Exception):
    """Base class for all package-specific errors."""


class UnknownElement(OrderLevelError):
    """An identifier does not name an element of the poset."""


class IdentifierCollision(OrderLevelError):
    """Two constituent posets share an element identifier and renaming is off."""


class CycleDetected(OrderLevelError):
    """The declared covers contain a directed cycle."""


class RedundantCover(OrderLevelError):
    """A declared cover is transitively implied by the others."""


class NotComparable(OrderLevelError):
    """rank_interval was asked for [i, j] with i not below j."""


class NotACover(OrderLevelError):
    """An edge passed as a prime edge is not a cover of the bounded poset."""


class NotInterior(OrderLevelError):
    """A point violates the strict inequalities of the open cone."""


class HasNegativeCycle(OrderLevelError):
    """A digraph that must define potentials contains a negative cycle."""


class BudgetExceeded(OrderLevelError):
    """An enumeration would exceed its configured work budget."""


class NegativeHStarEntry(OrderLevelError):
    """The h* transform produced a negative entry (always a bug on valid input)."""


class ConditionViolated(OrderLevelError):
    """A cover fails the height/depth inequality, so no sharp point exists."""


class EmptyShrink(OrderLevelError):
    """An operation that requires interior points received an empty shrink."""


class DimensionMismatch(OrderLevelError):
    """Point sets or polytopes of different ambient dimensions were combined."""


class InfeasibleSystem(OrderLevelError):
    """A difference-constraint system has no solution (negative cycle)."""


class UnboundedPolytope(OrderLevelError):
    """The constraint system does not bound the polytope."""


class NotFullDimensional(OrderLevelError):
    """The polytope has no interior, so interior-based notions are undefined."""


class CheckerDisagreement(OrderLevelError):
    """Two levelness checkers returned different verdicts on the same poset.

    Carries the poset and both certificates for diagnosis.
    """

    def __init__(self, message: str, poset=None, certificates=None):
        super().__init__(message)
        self.poset = poset
        self.certificates = certificates or {}
