"""Exception types shared across the package."""


class HypothesisError(ValueError):
    """A mathematical hypothesis of an operation is violated.

    Examples: non-squarefree d, a split or ramified prime where an inert one
    is required, a level sharing a factor with 2D.  The message always names
    the violated hypothesis.
    """


class GuardError(RuntimeError):
    """A resource guard refused the computation.

    Raised when an enumeration would be too large or a truncation order is
    too small to certify the requested quantity.
    """


class IdentityCheckError(ArithmeticError):
    """An exact identity that must hold failed.

    Signals either a malformed input module or an implementation bug; never
    expected on valid inputs.
    """
