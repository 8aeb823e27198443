"""Exception types raised across the package.

Every error derives from :class:`QuasiError`, which is a ``ValueError`` so
callers that only care about bad input can catch the builtin.
"""


class QuasiError(ValueError):
    pass


class LengthMismatch(QuasiError):
    pass


class NotNormalized(QuasiError):
    def __init__(self, total, tol=None):
        self.total = float(total)
        msg = f"values sum to {self.total!r}, expected 1"
        if tol is not None:
            msg += f" (tol {tol:g})"
        super().__init__(msg)


class BadSubset(QuasiError):
    pass


class CapExceeded(QuasiError):
    pass


class NegativeSingle(QuasiError):
    pass


class BadPartition(QuasiError):
    pass


class SpaceMismatch(QuasiError):
    pass


class NotBinary(QuasiError):
    pass


class MissingCoefficient(QuasiError):
    pass


class BadIndex(QuasiError):
    pass


class OutOfRange(QuasiError):
    pass


class InconsistentTargets(QuasiError):
    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class NotUnit(QuasiError):
    pass


class BadSign(QuasiError):
    pass


class DimMismatch(QuasiError):
    pass


class NotHermitian(QuasiError):
    pass


class NotProjector(QuasiError):
    pass


class NonPositiveSpecifiedMarginal(QuasiError):
    pass


class ComponentInfeasible(QuasiError):
    pass
