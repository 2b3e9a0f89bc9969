"""Exception hierarchy.

Every error raised for bad mathematical input derives from :class:`DomainError`;
the CLI maps those to exit code 2.
"""


class DomainError(ValueError):
    pass


class NonPrime(DomainError):
    pass


class CharTooSmall(DomainError):
    pass


class TooLarge(DomainError):
    pass


class ZeroElement(DomainError):
    pass


class GroupMismatch(DomainError):
    pass


class TooDeep(DomainError):
    pass


class DegreeTooSmall(DomainError):
    pass


class ZeroCoefficient(DomainError):
    pass


class CtxMismatch(DomainError):
    pass


class NotInvariant(DomainError):
    pass


class KindMismatch(DomainError):
    pass


class AbstractMode(DomainError):
    pass


class SearchTooLarge(DomainError):
    pass


class UnknownCheck(DomainError):
    pass


class ParseError(DomainError):
    pass
