"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    pass


class OutOfRegimeError(ValueError):
    """Raised when a closed form is asked for outside the energy range it covers."""


class DegenerateMatrixError(ArithmeticError):
    pass


class ResonanceError(ArithmeticError):
    """A periodic evaluation landed on (or a stencil crossed) a flagged near-singular point."""
