"""Exception hierarchy.

Every error raised by the engine derives from :class:`WittLiftError`.  The CLI
maps :class:`InputError` subclasses to exit code 2 and :class:`BudgetExceeded`
to exit code 3.
"""


class WittLiftError(Exception):
    pass


class InputError(WittLiftError):
    """Malformed or inconsistent input data."""


class BudgetExceeded(WittLiftError):
    pass


class InternalIntegralityFailure(WittLiftError):
    """A Witt polynomial coefficient came out non-integral (implementation bug)."""


class MixedRings(InputError):
    pass


class NotAUnit(InputError):
    pass


class UnsupportedField(InputError):
    pass


class BadLength(InputError):
    pass


class NotIrreducible(InputError):
    pass


class NotAPermutation(InputError):
    pass


class NotAGroup(InputError):
    pass


class NotASubgroup(InputError):
    pass


class NotAHomomorphism(InputError):
    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


class NotInvertible(InputError):
    pass


class NonFreeDual(InputError):
    pass


class NoEmbedding(InputError):
    pass


class IndexDivisibleByP(InputError):
    pass


class NotCyclic(InputError):
    pass


class NotEquivariant(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class NotExact(InputError):
    pass


class NotFree(InputError):
    pass


class NotACocycle(InputError):
    pass


class NotSurjective(InputError):
    pass


class CertificateRequired(InputError):
    pass


class NotALift(InputError):
    pass


class ClassNonzero(WittLiftError):
    pass


class NotSolvable(WittLiftError):
    """A linear system over the coefficient ring has no solution."""


class CertificateFailed(WittLiftError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BadShrink(WittLiftError):
    pass


class NotFound(WittLiftError):
    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript or []


class OracleDisagreement(WittLiftError):
    pass
