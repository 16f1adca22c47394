"""Exception types raised across the package."""


class CrossflowError(Exception):
    """Base class for all errors raised by crossflow."""


class NonPositiveRate(CrossflowError, ValueError):
    pass


class NegativeGap(CrossflowError, ValueError):
    pass


class UnsortedInput(CrossflowError, ValueError):
    pass


class NoRegionMatched(CrossflowError, RuntimeError):
    """A transition map found no region for its input. Always a bug."""


class NoNegativeRoot(CrossflowError, ArithmeticError):
    """The characteristic equation has no strictly negative root (unstable FIFO)."""


class Unstable(CrossflowError):
    """FIFO parameters violate the necessary convergence condition."""


class UnsupportedDeltaS(CrossflowError, ValueError):
    """Closed-form distributions exist only for a zero same-direction gap."""
