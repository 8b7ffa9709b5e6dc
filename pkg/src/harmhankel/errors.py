class DomainError(ValueError):
    """Raised when a parameter lies outside the range an operation is defined on."""


class DegenerateInputError(ValueError):
    pass


class RadicandError(ValueError):
    pass
