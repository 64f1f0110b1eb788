"""Exception hierarchy shared by all weaklog modules."""


class WeaklogError(Exception):
    """Base class for every error raised by this package."""


class ParseError(WeaklogError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class SignatureError(WeaklogError):
    """A connective is unknown to, or used with the wrong arity in, a signature."""


class UnassignedAtom(WeaklogError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"atom p{index} has no value in the assignment")


class CapExceeded(WeaklogError):
    """A desk-scale resource bound was hit."""


class DerivationFormatError(WeaklogError):
    pass


class DNFTooLarge(CapExceeded):
    pass


class FixpointNotFound(WeaklogError):
    pass
