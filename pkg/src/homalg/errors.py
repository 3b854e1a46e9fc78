"""Exception hierarchy shared by every module of the package."""


class HomAlgError(Exception):
    """Base class; ``code`` is the machine-readable name used in error JSON."""

    @property
    def code(self):
        return type(self).__name__


# exact linear algebra
class ShapeMismatch(HomAlgError):
    pass


class CompositionNotZero(HomAlgError):
    pass


class NotInLattice(HomAlgError):
    pass


# groups and actions
class NotLatinSquare(HomAlgError):
    pass


class NoIdentity(HomAlgError):
    pass


class NotAssociative(HomAlgError):
    pass


class NotASubgroup(HomAlgError):
    pass


class NotNormal(HomAlgError):
    pass


class NotAHomomorphism(HomAlgError):
    pass


class NotAbelian(HomAlgError):
    pass


class NotIndependent(HomAlgError):
    pass


class LengthMismatch(HomAlgError):
    pass


class TooLarge(HomAlgError):
    pass


# modules and complexes
class RingMismatch(HomAlgError):
    pass


class RingUnsupported(HomAlgError):
    pass


class GroupMismatch(HomAlgError):
    pass


class DegreeOverflow(HomAlgError):
    pass


class SignCheckFailed(HomAlgError):
    pass


class NotACycle(HomAlgError):
    pass


class NotAcyclic(HomAlgError):
    pass


# spectral sequences
class NotCanonicallyBounded(HomAlgError):
    pass


class NotStabilized(HomAlgError):
    pass


class HypothesisFailed(HomAlgError):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


# i/o
class AuditFailed(HomAlgError):
    """An internal consistency audit did not hold."""


class UnknownFormat(HomAlgError):
    pass


class InputError(HomAlgError):
    pass
