"""Exception hierarchy shared by all localred modules.

Every failure mode that callers are expected to handle gets its own class;
the CLI maps them to stable exit codes (see cli.EXIT_CODES).
"""


class LocalRedError(Exception):
    """Base class for all library errors."""


class DescriptorMismatch(LocalRedError):
    """Operands live over different ring descriptors."""


class PrecisionExhausted(LocalRedError):
    """An answer would depend on digits beyond the tracked precision.

    Raised instead of guessing: results are never silently truncated.
    """


class NonUnit(LocalRedError):
    """Inversion of an element with positive or undetermined valuation."""


class NonIntegralResult(LocalRedError):
    """A coordinate change produced a non-integral coefficient."""


class NotEisenstein(LocalRedError):
    """Polynomial fails the Eisenstein condition at available precision."""


class NotAGroup(LocalRedError):
    """Supplied automorphisms are not closed / lack identity or inverses."""


class InconsistentGroup(LocalRedError):
    """Ramification filtration contradicts the different valuation."""


class ResidueFieldTooSmall(LocalRedError):
    """A required root lives in a proper extension of the residue field."""


class NotSemiStableOverL(LocalRedError):
    """The model over the extension ring is not of type I0 or In."""


class BudgetExceeded(LocalRedError):
    """A congruence search exceeded its branch budget.

    Distinct from a certified negative answer: no conclusion was reached.
    """


class VerificationFailed(LocalRedError):
    """A verdict that is asserted by theory failed on concrete data.

    This is flagged loudly: it would falsify an identity the library
    treats as exact.
    """


class ParseError(LocalRedError):
    """Malformed JSON input on the CLI surface."""
