"""Exception hierarchy shared by all twistmod modules."""


class TwistmodError(Exception):
    """Base class for all library errors."""


class InsufficientPrecision(TwistmodError):
    """A result cannot be normalized at the available series precision."""


class DivisionByZero(TwistmodError):
    """Division by an exact zero series or zero twisted polynomial."""


class NotSeparable(NotImplementedError, TwistmodError):
    """An operation requiring a nonzero constant coefficient got q with a0 = 0."""

    def __init__(self, msg="constant coefficient is zero"):
        super().__init__(msg)


class CoefficientsNotIntegral(TwistmodError):
    """Hensel data requested for a polynomial with a negative-valuation coefficient."""


class OutsideBall(TwistmodError):
    """Hensel solve target lies outside the guaranteed bijectivity ball."""


class SemilinearSolveFailure(TwistmodError):
    """A required Frobenius-semilinear relation was not found within the window cap."""


class WindowSolveFailure(TwistmodError):
    """A finite-window linear solve that theory guarantees solvable failed (bug signal)."""


class WindowTooSmall(TwistmodError):
    """A coefficient window cannot represent the image of the requested map."""

    def __init__(self, msg, bound=None):
        super().__init__(msg)
        self.bound = bound


class UnboundedSearch(TwistmodError):
    """No tropical bound could be established to make a search finite."""


class ParseError(TwistmodError):
    """Malformed input text."""

    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")
        self.pos = pos
