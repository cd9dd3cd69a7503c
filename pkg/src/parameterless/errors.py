"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid problem, engine or run configuration."""


class InvariantViolation(RuntimeError):
    """An internal data-structure invariant was broken by the caller."""
