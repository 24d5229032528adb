"""Exception types raised across the package."""


class PartitionError(Exception):
    """Base class for errors raised by :mod:`hspart`."""


class DimensionError(PartitionError, ValueError):
    """Operands have incompatible dimensions."""


class NotHermitianError(PartitionError, ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class InvalidProjectorError(PartitionError, ValueError):
    """A matrix offered as a projector is not a Hermitian idempotent."""


class InvalidEnsembleError(PartitionError, ValueError):
    """Occupations outside [0, 1] or a non-unitary statistical basis."""


class NumericalConsistencyError(PartitionError, ArithmeticError):
    """A quantity that must be real (or bounded) came out otherwise."""


class DivergenceError(PartitionError, ArithmeticError):
    """An entropy expectation involves ``log 0`` with nonzero weight.

    ``reasons`` lists :class:`hspart.entropy_partition.Divergence` records.
    """

    def __init__(self, message, reasons=()):
        super().__init__(message)
        self.reasons = tuple(reasons)


class ResourceError(PartitionError, MemoryError):
    """Requested Fock space exceeds the dense-oracle size cap."""
