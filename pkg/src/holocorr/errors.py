"""Exception hierarchy. Every domain error derives from :class:`HolocorrError`
so the command line can map them to exit code 1 in one place."""


class HolocorrError(Exception):
    pass


class ChainError(HolocorrError):
    """A chain violates the definition of a correspondence."""


class ZeroPolynomial(ChainError):
    pass


class ConstantPolynomial(ChainError):
    pass


class LineComponent(ChainError):
    pass


class DuplicateComponent(ChainError):
    pass


class DegeneracyDetected(ChainError):
    pass


class ResultantDegenerate(ChainError):
    pass


class InterpolationIllConditioned(ChainError):
    pass


class NonConvergence(HolocorrError):
    pass


class TreeTooLarge(HolocorrError):
    pass


class InfiniteAtomPresent(HolocorrError):
    pass


class NotInvariant(HolocorrError):
    pass


class OracleInconsistency(HolocorrError):
    """Two independent routes of the finite oracle disagreed."""
