"""Exception hierarchy. Every failure raised by the library derives from SubrankError."""


class SubrankError(ValueError):
    pass


# instance-level
class DimensionMismatch(SubrankError):
    pass


class NegativeWeight(SubrankError):
    pass


class InfeasibleCover(SubrankError):
    pass


class NotNormalized(SubrankError):
    pass


class NonPositiveThreshold(SubrankError):
    pass


class ElementInSet(SubrankError):
    pass


class NotAPermutation(SubrankError):
    pass


# valuation families
class NegativeValue(SubrankError):
    pass


class BadUniverseRef(SubrankError):
    pass


class NonPositiveNormalizer(SubrankError):
    pass


class NotMonotone(SubrankError):
    pass


class NotSubmodular(SubrankError):
    pass


class TooLarge(SubrankError):
    pass


class TooLargeForExhaustive(TooLarge):
    pass


class AllMarginalsZero(SubrankError):
    pass


# generators
class UncoverableUniverseItem(SubrankError):
    pass


class NotPerfectSquare(SubrankError):
    pass


class BadEntry(SubrankError):
    pass


class BadParams(SubrankError):
    pass


# analysis
class WrongTraceKind(SubrankError):
    pass


class BadChain(SubrankError):
    pass


class InconsistentTrace(SubrankError):
    pass
