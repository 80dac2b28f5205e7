"""Exception hierarchy.

Two bases: DataError for malformed or inconsistent input (CLI exit code 2)
and NumericalError for numerical breakdown (CLI exit code 3).
"""


class AmgclustError(Exception):
    """Base for all package errors."""


class DataError(AmgclustError):
    """Invalid or inconsistent input data."""


class NumericalError(AmgclustError):
    """Numerical breakdown (singularity, indefiniteness, degeneracy)."""


# graph construction / validation

class SelfLoop(DataError):
    pass


class DuplicateEdge(DataError):
    pass


class IndexOutOfRange(DataError):
    pass


class NonPositiveWeight(DataError):
    pass


class DisconnectedInput(DataError):
    pass


class EdgeNotPresent(DataError):
    pass


class NonPositiveLambda(DataError):
    pass


class EmptyGraph(DataError):
    pass


# attribute tables / augmentation

class EmptyTable(DataError):
    pass


class RowCountMismatch(DataError):
    pass


# multilevel solver

class ZeroDiagonal(NumericalError):
    pass


class SingularCoarsest(NumericalError):
    pass


class EmptyComposite(DataError):
    pass


class NotSpd(NumericalError):
    pass


# embedding

class AllVectorsZero(NumericalError):
    pass


class DimensionMismatch(DataError):
    pass


class ShapeMismatch(DataError):
    pass


# clustering

class KTooLarge(DataError):
    pass


class DegenerateCoordinates(NumericalError):
    pass


class EmptyCluster(DataError):
    pass


# generators

class InfeasibleDegrees(DataError):
    pass


class InfeasibleSpec(DataError):
    pass


# scoring

class VertexSetMismatch(DataError):
    pass
