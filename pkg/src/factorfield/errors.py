"""Exception hierarchy shared by every module of the package."""


class ChainError(ValueError):
    """Base class for invalid inputs to any chain computation."""


class NonCanonicalSpec(ChainError):
    pass


class ChiOutOfRange(ChainError):
    pass


class DegenerateCoupling(ChainError):
    pass


class SizeTooLarge(ChainError):
    pass


class BadIndices(ChainError):
    pass


class WeightOutOfRange(ChainError):
    pass


class BlockOutOfRange(ChainError):
    pass


class NonPositiveDelta(ChainError):
    pass


class NonPositiveTemperature(ChainError):
    pass


class NegativeDiscriminant(ChainError):
    """Pair correlators that cannot come from any physical two-spin state."""


class NotADensityMatrix(ChainError):
    pass


class NotFullyConnected(ChainError):
    pass


class NotNearestNeighbor(ChainError):
    pass


class VzUnsupported(ChainError):
    """The free-fermion route only covers v_z = 0; use the oracle instead."""


class SeparationOutOfRange(ChainError):
    pass


class EmptyGrid(ChainError):
    pass


class ConfigError(ChainError):
    pass
