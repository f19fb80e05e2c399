"""Exception hierarchy shared by all modules."""


class TwistCartanError(Exception):
    pass


class GroupoidError(TwistCartanError):
    """A groupoid table violates an axiom. `axiom` names the first failure."""

    axiom = "groupoid"

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class DomainMismatch(GroupoidError):
    axiom = "domain"


class BadUnit(GroupoidError):
    axiom = "unit"


class BadInverse(GroupoidError):
    axiom = "inverse"


class NonAssociative(GroupoidError):
    axiom = "associativity"


class NotSubgroupoid(TwistCartanError):
    pass


class NotNormal(TwistCartanError):
    pass


class NotComposable(TwistCartanError):
    pass


class InvalidCocycle(TwistCartanError):
    pass


class FiberMismatch(TwistCartanError):
    pass


class NotAbelian(TwistCartanError):
    pass


class NotCoboundary(TwistCartanError):
    pass


class NotHomomorphic(TwistCartanError):
    pass


class NotInDomain(TwistCartanError):
    pass


class NotBisection(TwistCartanError):
    pass


class CriteriaDisagree(TwistCartanError):
    """Raised when criteria that must agree do not. Always a bug."""


class PreconditionFailed(TwistCartanError):
    pass


class NotCoprime(TwistCartanError):
    pass


class Unsupported(TwistCartanError):
    pass


class ModulusLimit(TwistCartanError):
    pass


class ParseError(TwistCartanError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
