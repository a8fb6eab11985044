"""Exception hierarchy.

Every error raised on purpose derives from :class:`BottcherError`; the
``exit_code`` attribute is what the command line maps it to.
"""


class BottcherError(Exception):
    exit_code = 1


class InputError(BottcherError, ValueError):
    exit_code = 2


class InvalidSupport(InputError):
    pass


class NotNormalized(InputError):
    pass


class EmptyDistribution(InputError):
    pass


class DomainError(InputError):
    pass


class NotInSupport(DomainError):
    pass


class FeasibilityError(BottcherError):
    exit_code = 3


class SizeCapExceeded(FeasibilityError):
    def __init__(self, n, size, cap=None):
        self.n = n
        self.size = size
        self.cap = cap
        msg = f"generation {n} needs {size} lattice points"
        if cap is not None:
            msg += f" (cap {cap})"
        super().__init__(msg)


class ZeroProbabilityEvent(FeasibilityError):
    pass


class NoAcceptedSamples(FeasibilityError):
    pass


class PathOverflow(FeasibilityError, OverflowError):
    pass


class ConvergenceFailure(BottcherError, ArithmeticError):
    def __init__(self, where, residual):
        self.where = where
        self.residual = residual
        super().__init__(f"no convergence at {where} (residual {residual:.3g})")


class BracketFailure(ConvergenceFailure):
    pass


class RegimeError(BottcherError):
    exit_code = 4


class DegenerateDistribution(RegimeError):
    pass


class NotBoettcherCase(RegimeError):
    pass


class NotFatTailCase(RegimeError):
    pass
