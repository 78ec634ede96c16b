"""Exception types shared across the toolkit."""


class DataError(ValueError):
    """Malformed dataset, model file or ROC file."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class NumericalError(RuntimeError):
    """A numerical routine diverged or produced non-finite values."""
