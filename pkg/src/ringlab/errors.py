"""Exception hierarchy shared by every ringlab module."""


class RingLabError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(RingLabError, ValueError):
    pass


class CapExceededError(RingLabError):
    """A construction or classification would exceed the configured order cap."""

    def __init__(self, what, required, allowed, span=None):
        self.what = what
        self.required = required
        self.allowed = allowed
        self.span = span
        super().__init__(f"{what}: order {required} exceeds cap {allowed}")


class InvalidIdealError(RingLabError, ValueError):
    pass


class RingMismatchError(RingLabError, TypeError):
    pass


class ElementParseError(RingLabError, ValueError):
    pass


class CertificateInvalidError(RingLabError, ValueError):
    pass


class InternalInconsistencyError(RingLabError, AssertionError):
    """A computed result failed its own post-check; indicates a bug."""


class ArithmeticOverflowError(RingLabError, OverflowError):
    pass


class DSLSyntaxError(RingLabError, ValueError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"at byte {offset}: {message}{detail}")


class DSLSemanticError(RingLabError, ValueError):
    def __init__(self, message, span=None):
        self.span = span
        super().__init__(message)
