"""Exception hierarchy.

Input problems derive from :class:`InputError`, numerical and model-fitting
problems from :class:`ComputationError`; the CLI maps the two families to
different exit codes.
"""


class GrowthTrendError(Exception):
    pass


class InputError(GrowthTrendError, ValueError):
    pass


class ComputationError(GrowthTrendError):
    pass


# ingestion / windowing
class MalformedRow(InputError):
    pass


class DuplicateYear(InputError):
    pass


class GapInYears(InputError):
    pass


class NonPositiveValue(InputError):
    pass


class SeriesTooShort(InputError):
    pass


class WindowOutOfRange(InputError):
    pass


class UnknownId(InputError, KeyError):
    pass


class BadGridConfig(InputError):
    pass


# arima core
class TooShort(InputError):
    pass


class NonStationaryParams(ComputationError, ValueError):
    pass


class NumericalBreakdown(ComputationError):
    pass


class InsufficientData(ComputationError):
    pass


class DegenerateDesign(ComputationError):
    pass


class SingularHessian(ComputationError):
    pass


class UnknownCoefficient(GrowthTrendError, KeyError):
    pass


# curve fits / selection
class RankDeficient(ComputationError):
    pass


class ZeroVariance(ComputationError):
    pass


class AICcUndefined(ComputationError):
    pass


class AllFitsFailed(ComputationError):
    pass
