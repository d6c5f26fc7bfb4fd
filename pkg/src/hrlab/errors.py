"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`HrlabError`
so the CLI can map it to exit code 1 without swallowing programming bugs.
"""


class HrlabError(Exception):
    """Base class for all deliberate failures."""


# matrix_core
class NotNormal(HrlabError):
    pass


class NoConvergence(HrlabError):
    pass


class DomainError(HrlabError):
    pass


class NotOrthonormal(HrlabError):
    pass


class NotHermitian(HrlabError):
    pass


# povm
class InvalidPovm(HrlabError):
    pass


class ClusterAmbiguity(HrlabError):
    pass


# exponents
class AllDiagonal(HrlabError):
    pass


class InvalidPoint(HrlabError):
    pass


# choquet / lp
class NotSeparating(HrlabError):
    pass


class LpInfeasible(HrlabError):
    pass


class InvalidParams(HrlabError):
    pass


class DividesViolation(InvalidParams):
    pass


class GcdViolation(InvalidParams):
    pass


class BetaSumViolation(InvalidParams):
    pass


class PairMismatch(InvalidParams):
    pass


# convergence_lab
class IndexOverflow(HrlabError):
    pass


class ProbeUnsafe(HrlabError):
    pass


class BoundaryPoint(HrlabError):
    pass


class RegimeError(HrlabError):
    pass


# inequalities
class NotContraction(HrlabError):
    pass


class NotPsd(HrlabError):
    pass


class ShapeMismatch(HrlabError):
    pass


class NotProjection(HrlabError):
    pass


class SigmaViolation(HrlabError):
    pass


# cli
class ParseError(HrlabError):
    pass
