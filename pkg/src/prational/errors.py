class InvalidInput(ValueError):
    pass


class NoRoot(ValueError):
    pass


class PrecisionLoss(ArithmeticError):
    pass


class NotPrincipal(Exception):
    pass


class ComputationRefused(Exception):
    """The requested regime is outside what the method supports."""


class ConfigError(ValueError):
    pass
