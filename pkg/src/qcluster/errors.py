"""Exception taxonomy shared across the package.

Identity failures (NotDivisible, ScheduleMismatch, Mismatch, ...) are fatal by
design: they signal that a structural claim the engine is supposed to verify
does not hold, so they must never be swallowed.
"""


class QClusterError(Exception):
    """Base class for all package errors."""


class InvalidType(QClusterError):
    """Unsupported (type label, rank) pair."""


class RingMismatch(QClusterError):
    """Operands live over different coefficient rings."""


class ArityMismatch(QClusterError):
    """Operands have a different number of generators."""


class ExponentOverflow(QClusterError):
    """An exponent would leave the packed-field domain."""


class NotDivisible(QClusterError):
    """Exact division failed; on cluster walks this falsifies a Laurent identity."""


class NonInvertibleSubstitution(QClusterError):
    """A negatively-powered generator was assigned a non-unit image."""


class IndexOutOfRange(QClusterError, IndexError):
    """Mutation index outside 1..n."""


class NonCommutingSet(QClusterError):
    """Compound mutation requested on indices i, j with B_ij != 0."""


class ScheduleMismatch(QClusterError):
    """An exchange matrix asserted along a walk differs from the expected form."""


class SingularBoundary(QClusterError):
    """Backward recursion step through the vanishing entry at the KR point."""


class NotAdjacent(QClusterError):
    """Neighbor-product factor requested for non-adjacent Dynkin nodes."""


class NoSolution(QClusterError):
    """No fourth-root-of-unity normalization exists (cannot occur in finite type)."""


class Mismatch(QClusterError):
    """Two independent computation routes disagree."""


class DivisibilityFailure(QClusterError):
    """A coefficient polynomial misses a required exchange-binomial factor."""


class PolynomialityFailure(QClusterError):
    """A specialized cluster variable has a negative exponent."""


class WindowEdge(QClusterError):
    """A strict-boundary T-system step referenced a site outside the window."""


class InvalidWindow(QClusterError):
    """Empty or inverted lattice window."""
