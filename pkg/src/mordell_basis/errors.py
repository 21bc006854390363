"""Exception hierarchy shared by the package."""


class MordellBasisError(Exception):
    """Base class for all errors raised by this package."""


class SingularCurveError(MordellBasisError):
    """The Weierstrass model has zero discriminant."""


class NotOnCurveError(MordellBasisError):
    """A point does not satisfy the curve equation."""


class MalformedPointError(MordellBasisError):
    """Coordinates admit no (alpha/delta^2, beta/delta^3) normalization."""


class TwoTorsionError(MordellBasisError):
    """Doubling a 2-torsion point (the result is the point at infinity)."""


class PreconditionError(MordellBasisError):
    """A documented hypothesis of an operation does not hold."""


class PrecisionError(MordellBasisError):
    """The working precision is too low to produce a valid enclosure."""


class BoundError(MordellBasisError):
    """A validated bound could not be established."""


class BudgetExceededError(MordellBasisError):
    """A search or factorization ran past its configured budget."""


class CoverageError(MordellBasisError):
    """A verdict map does not cover every required line of (Z/p)^s."""


class CertificationError(MordellBasisError):
    """Certification cannot proceed (e.g. regulator enclosure touches 0)."""
