class ArtaxisError(Exception):
    """Base class of every error raised by artaxis."""


class DomainError(ArtaxisError, ValueError):
    pass


class ParamValidationError(ArtaxisError, ValueError):
    def __init__(self, field, message):
        super().__init__(message)
        self.field = field


class NonPositiveCoefficientError(ParamValidationError):
    def __init__(self, field, value=None):
        super().__init__(field, f'expect `{field}` to be strictly positive, but got {value!r}')


class GammaOrderViolationError(ParamValidationError):
    def __init__(self, lower, upper, names=('gamma0', 'gamma1')):
        super().__init__(names[0], f'expect {names[0]} <= {names[1]}, but got {names[0]}={lower!r} > {names[1]}={upper!r}')


class NegativeValueError(DomainError):
    pass


class GridMismatchError(ArtaxisError, ValueError):
    pass


class NoConvergenceError(ArtaxisError, RuntimeError):
    pass


class StepRejectedError(ArtaxisError, RuntimeError):
    def __init__(self, message, undershoot=0.0):
        super().__init__(message)
        self.undershoot = undershoot


class ConfigSyntaxError(ArtaxisError, ValueError):
    def __init__(self, message, lines=()):
        lines = tuple(lines)
        where = ', '.join(str(n) for n in lines)
        super().__init__(f'line {where}: {message}' if lines else message)
        self.lines = lines


class UnknownKeyError(ArtaxisError, ValueError):
    def __init__(self, name):
        super().__init__(f'unknown configuration key `{name}`')
        self.name = name


class ConfigValidationError(ArtaxisError, ValueError):
    def __init__(self, field, message):
        super().__init__(f'invalid value for `{field}`: {message}')
        self.field = field
