"""Exception hierarchy.

Every computational failure raises a subclass of :class:`BurnsideError`; the
CLI reports the class name and exits with status 3.
"""


class BurnsideError(Exception):
    """Base class for all computation errors."""


# abelian groups
class InfiniteCokernel(BurnsideError):
    pass


class ElementNotInGroup(BurnsideError):
    pass


class GroupTooLarge(BurnsideError):
    pass


class ParentMismatch(BurnsideError):
    pass


# symbols
class InvalidSymbol(BurnsideError):
    """Grading or generation constraint of a symbol is violated."""


class IndexOutOfRange(BurnsideError):
    pass


class SequenceTooShort(BurnsideError):
    pass


class PreconditionFailed(BurnsideError):
    pass


# lattice
class UniverseOverflow(BurnsideError):
    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"symbol universe exceeds max_size={bound}")


class SymbolOutsideUniverse(BurnsideError):
    pass


class CertificateMismatch(BurnsideError):
    pass


# classes / maps
class InvalidComponent(BurnsideError):
    pass


class CharacterOutsideGroup(BurnsideError):
    pass


class MissingIncidenceData(BurnsideError):
    pass


# toric
class ConeNotInFan(BurnsideError):
    pass


class RayNotInteriorToAnyCone(BurnsideError):
    pass


class NonDivisorialInput(BurnsideError):
    pass


class InfiniteStabilizer(BurnsideError):
    pass


class InvalidFan(BurnsideError):
    pass
