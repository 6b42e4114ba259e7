"""Exception types shared across the package."""


class TitsError(Exception):
    """Base class for all errors raised by titslab."""


class ParseError(TitsError, ValueError):
    pass


class SupportMismatch(TitsError, ValueError):
    pass


class CapExceeded(TitsError, ValueError):
    """A size guard was hit; raise the cap explicitly to go further."""


class CharacteristicMismatch(TitsError, ValueError):
    pass


class NotCanonical(TitsError, ValueError):
    pass
