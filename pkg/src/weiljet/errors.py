"""Exception hierarchy shared by all weiljet modules."""


class WeilJetError(Exception):
    """Base class for every error raised by this package."""

    code = "error"


class SpecMismatchError(WeilJetError, ValueError):
    code = "spec_mismatch"


class InvalidMorphismError(WeilJetError, ValueError):
    """Generator images do not define an algebra morphism."""

    code = "invalid_morphism"


class NotAutomorphismError(WeilJetError, ValueError):
    code = "not_automorphism"


class DomainError(WeilJetError, ValueError):
    """A function was evaluated outside the open set where it is smooth."""

    code = "domain_error"


class ArityError(WeilJetError, ValueError):
    code = "arity_mismatch"


class AlgebraNotJetTypeError(WeilJetError, ValueError):
    """The fibre algebra is not a full truncation quotient R[x1..xm]/m^(k+1)."""

    code = "algebra_not_jet_type"


class ParseError(WeilJetError, ValueError):
    code = "parse_error"

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class PointMismatchError(WeilJetError, ValueError):
    """Composed jets or jets and maps are anchored at different points."""

    code = "point_mismatch"
