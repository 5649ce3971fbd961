"""Exception types shared across the library.

The CLI maps these onto its exit-code contract, so the distinctions matter:
structural garbage (malformed input), arguments outside an operation's
domain, and quantitative theorem premises that fail are three different
failure modes and must stay distinguishable.
"""


class MalformedInputError(ValueError):
    """Structurally invalid input: wrong shape, negative, NaN or non-finite entries."""


class DomainError(ValueError):
    """Argument outside an operation's domain (negative abscissa, start point
    with infinite value, infinite entries where reals are required)."""


class PremiseError(ValueError):
    """A quantitative theorem premise fails.  Kept distinct from DomainError so
    callers can exercise the rejected-premise path separately."""


class PreconditionError(ValueError):
    """A structural precondition fails: invalid distance table, invalid weight,
    or a gap bound that the supplied sequence does not actually satisfy."""


class SufficiencyError(ValueError):
    """A zero off-diagonal entry makes a positive-off-diagonal table unachievable."""


class DivergenceError(RuntimeError):
    """Bracketing failed: the running integral does not grow past the requested
    value, which signals a rate profile whose integral does not diverge."""


class UndeterminedError(ValueError):
    """The finite prefix does not decide the requested tail property."""


class ScenarioError(ValueError):
    """A scenario file is missing fields or holds values that do not parse."""
