"""Exception hierarchy shared by all modules."""


class AlgebraError(Exception):
    """Base class for every library error."""


# ring / matrix level

class NonSquare(AlgebraError):
    pass


class NotAUnit(AlgebraError):
    pass


class UnknownVariable(AlgebraError):
    pass


class RingMismatch(AlgebraError):
    pass


class EntryParseError(AlgebraError):
    """Malformed entry text; carries the offending position."""

    def __init__(self, text, pos, reason):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"parse error at position {pos} in {text!r}: {reason}")


# bilinear forms

class FlavorMismatch(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class CongruenceFails(AlgebraError):
    """Congruence check failed; records the first mismatching entry."""

    def __init__(self, row, col, got, expected):
        self.row = row
        self.col = col
        self.got = got
        self.expected = expected
        super().__init__(
            f"congruence fails at entry ({row},{col}): got {got}, expected {expected}"
        )


class NotAlternating(AlgebraError):
    pass


class NotSymmetric(AlgebraError):
    pass


class NotUnimodular(AlgebraError):
    pass


class NoUnitPivot(AlgebraError):
    """No unit pivot available; carries the residual block."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"no unit pivot in residual block of size {residual.rows}")


# group completion

class CharacteristicTwo(AlgebraError):
    pass


class NotAField(AlgebraError):
    pass


class SearchExhausted(AlgebraError):
    def __init__(self, bound):
        self.bound = bound
        super().__init__(f"isotropic vector search exhausted at height bound {bound}")


class OddRank(AlgebraError):
    pass


class Undecidable(AlgebraError):
    pass


# symplectic group

class OddSize(AlgebraError):
    pass


class NotSymplectic(AlgebraError):
    pass


class UnsupportedInput(AlgebraError):
    pass


# chart geometry

class BadPivot(AlgebraError):
    pass


class NotInMembershipLocus(AlgebraError):
    pass


class UnsupportedScale(AlgebraError):
    pass


class NoMatchFound(AlgebraError):
    pass
