"""Exception types shared across the package."""


class LinkwalkError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LinkwalkError):
    """Malformed or empty edge-list input."""


class ConfigError(LinkwalkError):
    """Invalid parameter or configuration value."""


class ValidationError(LinkwalkError):
    """Input data violates a required precondition."""


class ContractError(LinkwalkError):
    """Caller broke an API contract, e.g. asked to score a known edge."""


class NumericError(LinkwalkError):
    """A numerical routine failed or produced an invalid result."""


class MetricError(LinkwalkError):
    """Evaluation metric is undefined for the given inputs."""
