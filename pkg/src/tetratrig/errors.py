"""Exception hierarchy shared by all modules."""


class TetraTrigError(Exception):
    """Base class for every error raised by this package."""


class DegenerateConfiguration(TetraTrigError):
    pass


class PointOffCarrier(TetraTrigError):
    pass


class DegenerateConic(TetraTrigError):
    pass


class DegenerateTriple(TetraTrigError):
    pass


class TangentLine(TetraTrigError):
    pass


class LineInQuadric(TetraTrigError):
    pass


class PointOffQuadric(TetraTrigError):
    pass


class NotInLattice(TetraTrigError):
    pass


class NotARoot(TetraTrigError):
    pass


class NotRealizable(TetraTrigError):
    pass


class NearDegenerate(NotRealizable):
    pass


class SignSystemInconsistent(TetraTrigError):
    pass


class VectorNotInDomain(TetraTrigError):
    pass


class NotInModuli(TetraTrigError):
    pass


class RoundTripFailure(TetraTrigError):
    pass


class ZeroPoleCollision(TetraTrigError):
    pass


class DegenerateQuadratic(TetraTrigError):
    pass


class NoVerifyingOrder(TetraTrigError):
    pass


class AssignmentAmbiguous(TetraTrigError):
    def __init__(self, msg, candidates=()):
        super().__init__(msg)
        self.candidates = list(candidates)


class NoConsistentAssignment(TetraTrigError):
    pass


class NotEquivalent(TetraTrigError):
    pass


class TooDegenerate(TetraTrigError):
    pass


class NotInComplement(TetraTrigError):
    pass


class ConsistencyFailure(TetraTrigError):
    pass


class GramMismatch(TetraTrigError):
    def __init__(self, msg, pairs=()):
        super().__init__(msg)
        self.pairs = list(pairs)


class NotInFPerp(TetraTrigError):
    pass


class AuxiliaryDegenerate(TetraTrigError):
    pass


class ConcurrencyFailure(TetraTrigError):
    def __init__(self, msg, scatter=None):
        super().__init__(msg)
        self.scatter = scatter
