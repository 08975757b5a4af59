"""Exception hierarchy.

Every error raised by the package derives from :class:`PolymorseError`, so
callers (and the CLI exit-code mapping) can catch by category.
"""


class PolymorseError(Exception):
    pass


class GenericityError(PolymorseError):
    """The linkage has a subset with l_I = l/2."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonGenericCentral(GenericityError):
    """A cyclic root sits on a central configuration (r = l_i / 2)."""


class InvalidLinkage(PolymorseError):
    pass


class DegenerateDelta(PolymorseError):
    pass


class IndexOutOfRange(PolymorseError, IndexError):
    pass


class OddOnly(PolymorseError):
    pass


class OddN(PolymorseError):
    """Zig-zag configurations need an even number of edges."""


class NOverflow(PolymorseError):
    pass


class DegenerateSwap(PolymorseError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NumericError(PolymorseError):
    """Base for failures of the numerical verification layer."""


class NotCritical(NumericError):
    def __init__(self, message, gradient_norm=None):
        super().__init__(message)
        self.gradient_norm = gradient_norm


class Degenerate(NumericError):
    pass


class GaugeFailure(NumericError):
    pass


class NoConvergence(NumericError):
    pass


class Unclassifiable(NumericError):
    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class DeformationError(PolymorseError):
    pass


class DeltaCrossing(DeformationError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class CentralCrossing(DeformationError):
    def __init__(self, message, t=None, edge=None):
        super().__init__(message)
        self.t = t
        self.edge = edge


class ClosureViolation(DeformationError):
    pass
