"""Exception hierarchy shared by every module of the package."""


class GeometryError(Exception):
    """Base class for all computation errors raised by this package."""


# exact arithmetic
class ZeroPolynomial(GeometryError):
    pass


class ZeroDegree(GeometryError):
    pass


class DuplicateAbscissa(GeometryError):
    pass


class InsufficientSamples(GeometryError):
    pass


class NotExactlyDivisible(GeometryError):
    pass


# properness
class DegenerateElimination(GeometryError):
    pass


class InsufficientDegreeBound(GeometryError):
    pass


class EmptyCloud(GeometryError):
    """No bounded-image samples were found; carries the (empty) cloud."""

    def __init__(self, message, cloud=None):
        super().__init__(message)
        self.cloud = cloud


# intersection homology
class InvalidPerversity(GeometryError):
    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class FiltrationNotClosed(GeometryError):
    pass


class DimensionViolation(GeometryError):
    pass


class DanglingSimplex(GeometryError):
    pass


# models
class NonMatchingArcLengths(GeometryError):
    pass


class InvalidGluing(GeometryError):
    pass
