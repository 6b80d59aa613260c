"""Exception hierarchy shared across the package.

Two branches matter to callers: ``InvalidInput`` (bad arguments, CLI exit
code 2) and ``ResourceGuard`` (work refused because it would exceed a size
guard, CLI exit code 3).
"""


class CyclotomeError(Exception):
    """Base class for all package errors."""


class InvalidInput(CyclotomeError):
    """Arguments violate a documented precondition."""


class ResourceGuard(CyclotomeError):
    """Refused: input exceeds a size guard."""


class CompositeP(InvalidInput):
    """Field characteristic failed primality."""


class NoField(InvalidInput):
    """No supported field for these parameters (even characteristic or overflow)."""


class ZeroInverse(InvalidInput):
    """Multiplicative inverse of zero requested."""


class ZeroIndex(InvalidInput):
    """A nonzero character index is required."""


class BadIndex(InvalidInput):
    """Cyclotomic class count does not divide the group order."""


class NotSkew(InvalidInput):
    """(D, -D) is not a partition of the nonzero group elements."""


class SameVertex(InvalidInput):
    """Two distinct vertices are required."""


class ZeroInD(InvalidInput):
    """Candidate difference sets must exclude the group identity."""


class WrongSize(InvalidInput):
    """Set size disagrees with the stated parameter."""


class NotTwoValued(InvalidInput):
    """Difference spectrum does not take exactly two values."""


class NotAds(InvalidInput):
    """Operation requires a certified almost difference set."""


class OutOfRange(InvalidInput):
    """Integer argument outside the supported range."""


class WrongResidue(InvalidInput):
    """Field order has the wrong residue class for this operation."""


class UnsupportedN(InvalidInput):
    """Exhaustive enumeration is only wired for specific small sizes."""


class NotCanonical(CyclotomeError):
    """Eigenvalue moduli do not form the expected two constant clusters."""


class TooLarge(ResourceGuard):
    """Input exceeds the feasibility cap for this operation."""
