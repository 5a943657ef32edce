"""Exception types shared across the package."""


class SigmaAlignError(Exception):
    """Base class for all package-specific errors."""


class EmptyMatrix(SigmaAlignError):
    pass


class DimensionMismatch(SigmaAlignError):
    pass


class SubsetExplosion(SigmaAlignError):
    """Raised when a constraint family would enumerate too many subsets."""


class UnknownPath(SigmaAlignError):
    pass


class SingularStack(SigmaAlignError):
    """A stacked channel matrix was (numerically) singular."""


class NotDiagonal(SigmaAlignError):
    """A matrix expected to be diagonal had off-diagonal mass."""


class InfeasiblePoint(SigmaAlignError):
    """The requested DoF point lies outside the region."""


class InconsistentPlan(SigmaAlignError):
    pass


class RankDeficientRandom(SigmaAlignError):
    """A random beamformer stayed rank deficient after one retry."""


class TallnessViolated(SigmaAlignError):
    """A signal-plus-interference matrix had more columns than rows."""


class RetriesExhausted(SigmaAlignError):
    """Too many consecutive singular channel draws."""


class InvalidGenerator(SigmaAlignError):
    """An exponent generator violated its declared row-distinctness."""


class ParseError(SigmaAlignError):
    pass
