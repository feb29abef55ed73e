"""Exception hierarchy shared by all modules."""


class FInverseError(Exception):
    """Base class for every error raised by this package."""


class UnknownGenerator(FInverseError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown generator {self.name!r}"


class BackendMismatch(FInverseError, ValueError):
    pass


class InvalidGroup(FInverseError, ValueError):
    pass


class InvalidMonoid(FInverseError, ValueError):
    pass


class NoSuchMorphism(FInverseError):
    pass


class ConsistencyFailure(FInverseError):
    """A construction that theory guarantees to be consistent was not."""


class NotComposable(FInverseError, ValueError):
    pass


class NotInBR(FInverseError, ValueError):
    pass


class TooLarge(FInverseError):
    pass


class NotInverse(FInverseError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class NotFInverse(FInverseError):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class TermSyntaxError(FInverseError, ValueError):
    """Parse failure with the offending position and the tokens that would have been accepted."""

    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = sorted(expected)
        found = repr(text[position]) if position < len(text) else "end of input"
        super().__init__(
            f"at position {position}: expected one of {', '.join(self.expected)}; found {found}"
        )

    def caret(self):
        return f"{self.text}\n{' ' * self.position}^"


class DomainError(FInverseError, ValueError):
    """A term or element lies outside the requested expansion."""
