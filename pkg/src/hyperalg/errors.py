"""Exception hierarchy shared by every module."""


class HyperalgError(ValueError):
    """Base class for all errors raised by this package."""


class VertexSetError(HyperalgError):
    """Invalid vertex set, or two vertex sets that are incompatible for an operation."""


class ClassificationError(HyperalgError):
    """A hypergraph does not belong to the class an operation requires."""


class ProbabilityMapError(HyperalgError):
    """Malformed probability map, or a query the map cannot answer."""


class ExprSyntaxError(HyperalgError):
    """Expression text does not match the grammar."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class AdmissibilityError(HyperalgError):
    """Expression inputs are not admissible (vertex sets do not compose)."""


class EnumerationBoundError(HyperalgError):
    """A computation would exceed the exhaustive-enumeration bound."""


class SerializationError(HyperalgError):
    """Malformed hypergraph text."""
