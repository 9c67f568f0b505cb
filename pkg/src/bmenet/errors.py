"""Exception types raised across the package."""


class BmeNetError(ValueError):
    """Base class for all input and precondition errors."""


class NotAPermutation(BmeNetError):
    pass


class AmbientMismatch(BmeNetError):
    pass


class InvalidSplit(BmeNetError):
    pass


class CrossingBridges(BmeNetError):
    pass


class TrivialBridge(BmeNetError):
    pass


class TooManyBridges(BmeNetError):
    pass


class NotAnArc(BmeNetError):
    pass


class NotABridge(BmeNetError):
    pass


class SameTaxon(BmeNetError):
    pass


class OutOfRange(BmeNetError):
    pass


class WeightSystemMismatch(BmeNetError):
    pass


class NotKalmanson(BmeNetError):
    pass


class UnweightedGraph(BmeNetError):
    pass


class TooLarge(BmeNetError):
    pass


class TrivialSplit(BmeNetError):
    pass


class TooManyBridgesRequested(BmeNetError):
    pass


class EmptyInput(BmeNetError):
    pass


class BudgetExceeded(BmeNetError):
    pass


class MalformedFile(BmeNetError):
    pass


class AsymmetricInput(MalformedFile):
    pass


class NegativeDistance(MalformedFile):
    pass
