"""Exception types shared across the package."""


class ToricDefError(Exception):
    """Base class for all errors raised by toricdef."""


class SpecMismatch(ToricDefError):
    """Two values built over different DVR specs were combined."""


class NotAUnit(ToricDefError):
    pass


class DenominatorCollision(ToricDefError):
    """A rational coefficient cannot be mapped into the target field."""


class DegreeCapExceeded(ToricDefError):
    pass


class NonConvergentSubstitution(ToricDefError):
    pass


class InvalidFraction(ToricDefError):
    pass


class NonReducedChain(ToricDefError):
    pass


class NotInCone(ToricDefError):
    pass


class NotRepresentable(ToricDefError):
    pass


class NoProgress(ToricDefError):
    """A both-way shifting pass did not raise the residual t-degree."""


class PointNotOnFiber(ToricDefError):
    pass


class PointNotOnVariety(ToricDefError):
    pass


class BudgetExceeded(ToricDefError):
    pass


class ParseError(ToricDefError):
    pass
