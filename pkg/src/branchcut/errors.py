"""Exception hierarchy for branchcut.

Every domain failure raises a subclass of :class:`BranchcutError`; plain
``ValueError``/``TypeError`` are reserved for programmer-facing precondition
violations (bad argument shapes, mixed precisions, and the like).
"""


class BranchcutError(Exception):
    """Base class for all branchcut domain errors."""


class InputError(BranchcutError):
    """Malformed user input: spec files, network files, CLI arguments."""


class SingularOperandError(BranchcutError):
    """Division by zero, log of zero, or a zero voltage where one is required."""


class RootAtOriginError(BranchcutError):
    """A log-ratio spec root sits at the origin, so no zero-expansion exists."""


class BranchPointEvalError(BranchcutError):
    """Reference evaluation requested exactly at a branch point."""


class DegeneracyError(BranchcutError):
    """The Pade linear system is defective at the requested order.

    ``max_solvable`` is the largest denominator degree M' < M for which the
    [L/M'] system is solvable; callers may rebuild there.
    """

    def __init__(self, L, M, max_solvable, message=None):
        self.L = L
        self.M = M
        self.max_solvable = max_solvable
        super().__init__(
            message
            or f"degenerate [{L}/{M}] Pade system; largest solvable M' = {max_solvable}"
        )


class NearPoleError(BranchcutError):
    """Rational evaluation requested too close to a denominator root.

    Carries the raw numerator and denominator values at the point.
    """

    def __init__(self, numerator, denominator, message=None):
        self.numerator = numerator
        self.denominator = denominator
        super().__init__(message or "evaluation point is numerically on a pole")


class NonConvergenceError(BranchcutError):
    """An iteration hit its cap without meeting its certificate.

    ``diagnostic`` holds the worst residual (root finding) or an
    error-vs-degree trace (SNBP stabilization).
    """

    def __init__(self, message, diagnostic=None):
        self.diagnostic = diagnostic
        super().__init__(message)


class PrecisionFloorError(BranchcutError):
    """A measured quantity fell below the reliable-digits floor of the context.

    Remediation: raise the precision (--bits) or lower the degrees.
    """


class InsufficientSampleError(BranchcutError):
    """Too few on-segment poles for a distribution test."""


class DegenerateNetworkError(BranchcutError):
    """The network's transfer matrix is singular."""
