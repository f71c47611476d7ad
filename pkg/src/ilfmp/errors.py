"""Exception types raised across the package."""


class FormulaSyntaxError(ValueError):
    """Malformed formula text. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class AssociativityError(FormulaSyntaxError):
    """An unparenthesised chain ``a |> b |> c``."""


class ArityError(ValueError):
    pass


class UnknownWorld(KeyError):
    def __str__(self) -> str:
        return f"unknown world {self.args[0]!r}"


class PreconditionError(ValueError):
    """A transformation or search was called on an input outside its domain."""

    def __init__(self, message: str, failures: list[str] | None = None):
        self.failures = list(failures or [])
        if self.failures:
            message = message + ": " + "; ".join(self.failures)
        super().__init__(message)


class BoundError(ValueError):
    """A size or depth argument is outside the supported range."""
