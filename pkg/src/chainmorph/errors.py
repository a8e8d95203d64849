"""Exception hierarchy.

Every domain error carries a stable ``code`` (the class name) so the CLI can
emit machine-readable error payloads.
"""


class ChainmorphError(Exception):
    @property
    def code(self):
        return type(self).__name__


class EmptySet(ChainmorphError):
    pass


class EmptyImage(ChainmorphError):
    pass


class ChainMismatch(ChainmorphError):
    pass


class NotOrientationPreserving(ChainmorphError):
    pass


class ConstantMap(ChainmorphError):
    pass


class NotAnIdeal(ChainmorphError):
    pass


class NotInjective(ChainmorphError):
    pass


class NotIdempotent(ChainmorphError):
    pass


class NotFull(ChainmorphError):
    pass


class NotInClass(ChainmorphError):
    pass


class KernelMismatch(ChainmorphError):
    pass


class SizeLimit(ChainmorphError):
    pass


class ClosureViolation(ChainmorphError):
    """A product left its monoid. Signals a library bug, not bad input."""


class CriterionFails(ChainmorphError):
    pass


class MalformedMap(ChainmorphError):
    pass


class UnsupportedShape(MalformedMap):
    pass


class UnboundedUnsupported(ChainmorphError):
    pass


class BadInterval(ChainmorphError):
    pass


class ParseError(ChainmorphError):
    pass


class UnknownSuite(ChainmorphError):
    pass


class VerificationError(ChainmorphError):
    """A construction failed its own post-condition check."""
