"""Domain errors raised by the cone machinery.

Each error name doubles as the CLI's machine-readable failure tag.
"""


class LpmchError(Exception):
    """Base class for all domain errors."""


class MinorNearZero(LpmchError):
    """A leading/trailing principal minor is zero up to tolerance."""

    def __init__(self, k, value=None):
        self.k = k
        self.value = value
        super().__init__(f"principal minor {k} is zero up to tolerance (value={value})")


class SingularMatrix(LpmchError):
    pass


class PatternMismatch(LpmchError):
    pass


class NegativeRadicand(LpmchError):
    """The squared diagonal entry in the factorization is not positive."""

    def __init__(self, j, value):
        self.j = j
        self.value = value
        super().__init__(f"nonpositive radicand {value} at diagonal position {j}")


class ConeKindMismatch(LpmchError):
    pass


class DimensionCap(LpmchError):
    pass


class DegenerateParameters(LpmchError):
    pass


class ConstraintViolation(LpmchError):
    pass


class SpecInvalid(LpmchError):
    pass


class GroupMismatch(LpmchError):
    pass
