"""Exception hierarchy shared by all modules."""


class ContaskError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class ComplexError(ContaskError):
    pass


class DuplicateColorInFacet(ComplexError):
    pass


class DanglingVertexId(ComplexError):
    pass


class NonMaximalFacet(ComplexError):
    pass


class RankOutOfRange(ComplexError):
    pass


class UnknownVertex(ComplexError):
    pass


class UnknownSimplex(ComplexError):
    pass


class NotPure(ComplexError):
    pass


class GeometryError(ContaskError):
    pass


class InvalidPoint(GeometryError):
    pass


class MixedAmbients(GeometryError):
    pass


class NoCommonCell(GeometryError):
    pass


class SubdivisionError(ContaskError):
    pass


class ImproperColoring(SubdivisionError):
    pass


class NotASubcomplex(SubdivisionError):
    pass


class DepthDecrease(SubdivisionError):
    pass


class MapError(ContaskError):
    pass


class PointOutsideDomain(MapError):
    pass


class NotSimplicial(MapError):
    pass


class UndefinedAtColorVertex(MapError):
    pass


class ImageHitsColorVertex(MapError):
    pass


class IncompatibleDomains(MapError):
    pass


class ApproximationError(ContaskError):
    pass


class DepthExhausted(ApproximationError):
    pass


class NotChromatic(ApproximationError):
    pass


class DimensionUnsupported(ApproximationError):
    pass


class MissingColorInCarrier(ApproximationError):
    pass


class TaskError(ContaskError):
    pass


class DomainMismatch(TaskError):
    pass


class BadParameters(TaskError):
    pass


class IISError(ContaskError):
    pass


class MalformedExecution(IISError):
    pass


class DepthMismatch(IISError):
    pass


class ExplosionGuard(IISError):
    pass
