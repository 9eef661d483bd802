"""Exception hierarchy.

Errors fall into three families that the CLI maps to distinct exit codes:
input problems, numerical degeneracies and infeasible configurations.
"""


class RadfError(Exception):
    """Base class for all package errors."""


class InputError(RadfError, ValueError):
    """Bad user-supplied data or configuration."""


class ParseError(InputError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class GapError(InputError):
    def __init__(self, message, month=None):
        super().__init__(message)
        self.month = month


class FrequencyError(InputError):
    pass


class AlignmentError(InputError):
    pass


class DomainError(InputError):
    pass


class DgpSpecError(InputError):
    pass


class NumericalError(RadfError, ArithmeticError):
    """A regression could not produce a finite statistic."""


class SingularDesignError(NumericalError):
    pass


class DegenerateFitError(NumericalError):
    pass


class NoValidWindowError(NumericalError):
    pass


class InfeasibleError(RadfError, ValueError):
    """Sample size and window settings are incompatible."""


class InsufficientObservationsError(InfeasibleError):
    pass


class CacheChecksumError(RadfError):
    pass
