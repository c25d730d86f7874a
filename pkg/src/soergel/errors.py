"""Exception hierarchy.

Errors fall into two camps: mathematical-expectation failures that a caller
may want to catch and report (e.g. a vanishing denominator under a bad
specialisation), and internal guards that indicate an arithmetic bug if they
ever fire.
"""


class ExactAlgebraError(Exception):
    """Base class for all library errors."""


class ZeroPolynomial(ExactAlgebraError):
    """Root counting was asked about the zero polynomial."""


class DenominatorVanishes(ExactAlgebraError):
    """A denominator root pairs to zero under the chosen coweight."""

    def __init__(self, root):
        self.root = tuple(root)
        super().__init__(f"denominator root {self.root} evaluates to zero")


class InfiniteGroup(ExactAlgebraError):
    """Group closure exceeded the configured size bound."""


class NonReducedWord(ExactAlgebraError):
    """A reduced expression was required."""


class InternalRankMismatch(ExactAlgebraError):
    """Extracted generating set fails to span; indicates an arithmetic bug."""


class PositivityViolated(ExactAlgebraError):
    """A positivity precondition on a weight failed."""


class CriteriaDisagree(ExactAlgebraError):
    """The four hard-Lefschetz criteria disagreed; internal consistency bug."""


class DegenerateMatrix(ExactAlgebraError):
    """Signature of a degenerate symmetric matrix was requested."""


class ParityViolation(ExactAlgebraError):
    """A lattice mixes even and odd degrees where parity is required."""


class HLRequired(ExactAlgebraError):
    """Hodge-Riemann data was requested without hard Lefschetz holding."""


class NotP1Sheaf(ExactAlgebraError):
    """Constructed moment-graph data violates the sheaf axioms."""


class HRHypothesisFails(ExactAlgebraError):
    """Decomposition requires both stalk forms to satisfy Hodge-Riemann."""


class DimensionBound(ExactAlgebraError):
    """Weight space dimension exceeds the configured bound."""


class SingularSpecialization(ExactAlgebraError):
    """Specialised contravariant form is singular (degenerate direction)."""
